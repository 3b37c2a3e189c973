// Copyright 2026 The repday Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/error.hpp"
#include "repday/evaluation.hpp"
#include "repday/random.hpp"
#include "repday/timeseries.hpp"

using namespace repday;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> points(n, Point(dim));
  for (auto& p : points)
    for (auto& x : p) x = u(rng);
  return points;
}

double brute_sq(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Relabels clusters in order of first appearance so partitions compare
// independently of cluster numbering.
std::vector<int> canonical(const std::vector<int>& assignment) {
  std::vector<int> map(assignment.size() + 1, -1);
  std::vector<int> out;
  int next = 0;
  for (int c : assignment) {
    if (map[c] < 0) map[c] = next++;
    out.push_back(map[c]);
  }
  return out;
}

HourlyRecordSet small_history(int n_days, std::uint64_t seed) {
  SyntheticHistorySpec spec;
  spec.n_days = n_days;
  spec.seed = seed;
  return synthesize_history(spec);
}

}  // namespace

TEST_CASE("assign picks the nearest centroid and breaks ties low") {
  std::vector<Point> centroids{{0.0, 0.0}, {2.0, 0.0}, {5.0, 5.0}};
  std::vector<Point> obs{{5.0, 5.0}, {1.0, 0.0}, {1.9, 0.1}};
  auto a = assign(obs, centroids);
  CHECK(a == std::vector<int>{2, 0, 1});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = random_points(rng, 10, 4);
    auto cs = random_points(rng, 3, 4);
    auto got = assign(pts, cs);
    for (size_t i = 0; i < pts.size(); ++i) {
      int best = 0;
      for (int c = 1; c < 3; ++c)
        if (brute_sq(pts[i], cs[c]) < brute_sq(pts[i], cs[best])) best = c;
      CHECK(got[i] == best);
    }
  }
}

TEST_CASE("recompute_centroids takes member means") {
  std::vector<Point> obs{{1.0}, {3.0}, {10.0}};
  auto single = recompute_centroids(obs, std::vector<int>{0, 0, 0}, 1);
  CHECK(single[0][0] == doctest::Approx(14.0 / 3.0));
  auto singles = recompute_centroids(obs, std::vector<int>{0, 1, 1}, 2);
  CHECK(singles[0][0] == 1.0);
  CHECK(singles[1][0] == 6.5);

  std::mt19937_64 rng(5);
  auto pts = random_points(rng, 20, 3);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[i] = i % 4;
  auto cs = recompute_centroids(pts, labels, 4);
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int i = c; i < 20; i += 4) s += pts[i][k];
      CHECK(cs[c][k] == doctest::Approx(s / 5.0).epsilon(1e-14));
    }
}

TEST_CASE("tkm edge cases") {
  std::mt19937_64 rng(11);
  auto pts = random_points(rng, 9, 3);
  auto all = tkm(pts, 9, 4);
  CHECK(all.sse == 0.0);
  CHECK(std::all_of(all.counts.begin(), all.counts.end(), [](int c) { return c == 1; }));

  auto one = tkm(pts, 1, 4);
  CHECK(one.counts == std::vector<int>{9});
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (const auto& p : pts) s += p[k];
    CHECK(one.centroids[0][k] == doctest::Approx(s / 9.0).epsilon(1e-14));
  }

  CHECK_THROWS_AS(tkm(pts, 10, 1), ParameterError);
  CHECK_THROWS_AS(tkm(pts, 0, 1), ParameterError);
}

TEST_CASE("tkm on planted groups matches the exhaustive best 3-partition") {
  std::vector<Point> pts;
  const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 9.0}};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int g = 0; g < 3; ++g)
    for (int i = 0; i < 4; ++i) pts.push_back({centers[g][0] + jitter(rng), centers[g][1] + jitter(rng)});

  // Oracle: enumerate all 3^12 labelings and keep the smallest SSE.
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> labels(12, 0);
  for (long code = 0; code < 531441; ++code) {
    long c = code;
    for (int i = 0; i < 12; ++i, c /= 3) labels[i] = static_cast<int>(c % 3);
    double sum[3][2] = {}, count[3] = {};
    for (int i = 0; i < 12; ++i) {
      sum[labels[i]][0] += pts[i][0];
      sum[labels[i]][1] += pts[i][1];
      count[labels[i]] += 1;
    }
    if (count[0] == 0 || count[1] == 0 || count[2] == 0) continue;
    double sse = 0.0;
    for (int i = 0; i < 12; ++i) {
      const int l = labels[i];
      const double dx = pts[i][0] - sum[l][0] / count[l];
      const double dy = pts[i][1] - sum[l][1] / count[l];
      sse += dx * dx + dy * dy;
    }
    best = std::min(best, sse);
  }

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto r = tkm(pts, 3, seed);
    CHECK(r.converged);
    CHECK(canonical(r.assignment) == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
    CHECK(r.sse == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("tkm invariants on random instances") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 30);
    const int dim = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % std::min(n, 6));
    auto pts = random_points(rng, n, dim);
    auto r = tkm(pts, k, trial);
    for (size_t i = 1; i < r.sse_trace.size(); ++i) CHECK(r.sse_trace[i] <= r.sse_trace[i - 1] + 1e-12);
    int total = 0;
    for (int c = 0; c < k; ++c) {
      CHECK(r.counts[c] > 0);
      total += r.counts[c];
      for (int d = 0; d < dim; ++d) {
        double s = 0.0, lo = 1e9, hi = -1e9;
        for (int i = 0; i < n; ++i)
          if (r.assignment[i] == c) {
            s += pts[i][d];
            lo = std::min(lo, pts[i][d]);
            hi = std::max(hi, pts[i][d]);
          }
        CHECK(std::abs(r.centroids[c][d] - s / r.counts[c]) <= 1e-9);
        CHECK(r.centroids[c][d] >= lo - 1e-12);
        CHECK(r.centroids[c][d] <= hi + 1e-12);
      }
    }
    CHECK(total == n);
    double sse = 0.0;
    for (int i = 0; i < n; ++i) sse += brute_sq(pts[i], r.centroids[r.assignment[i]]);
    CHECK(r.sse == doctest::Approx(sse).epsilon(1e-10));
    auto again = tkm(pts, k, trial);
    CHECK(again.assignment == r.assignment);
  }
}

TEST_CASE("mkm produces K1*K2 clusters and refines stage one") {
  std::mt19937_64 rng(8);
  auto pts = random_points(rng, 40, 5);
  auto r = mkm(pts, 5, 2, 17);
  CHECK(r.centroids.size() == 10);
  int total = 0;
  for (int c : r.counts) {
    CHECK(c > 0);
    total += c;
  }
  CHECK(total == 40);
  CHECK(r.sse <= r.stage_one_sse + 1e-12);
  auto stage_one = tkm(pts, 5, 17);
  CHECK(r.stage_one_sse == doctest::Approx(stage_one.sse).epsilon(1e-14));
  // Members of final cluster c*K2 + j come from stage-one cluster c.
  for (size_t i = 0; i < pts.size(); ++i) CHECK(r.assignment[i] / 2 == stage_one.assignment[i]);
}

TEST_CASE("mkm degenerates to tkm") {
  std::mt19937_64 rng(12);
  auto pts = random_points(rng, 25, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(mkm(pts, 4, 1, seed).assignment == tkm(pts, 4, seed).assignment);
    CHECK(mkm(pts, 1, 4, seed).assignment == tkm(pts, 4, derive_seed(seed, 0)).assignment);
  }
}

TEST_CASE("mkm rejects a stage-one cluster smaller than K2") {
  std::vector<Point> pts{{0.0}, {0.1}, {0.2}, {0.3}, {100.0}};
  try {
    mkm(pts, 2, 2, 1);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("1 member") != std::string::npos);
  }
}

TEST_CASE("representative days carry weights and per-unit profiles") {
  auto history = small_history(40, 5);
  auto set = build_day_observations(history);
  auto points = observation_points(set);

  auto singles = tkm(points, 40, 1);
  auto days = to_representative_days(singles, set.scaling, set.layout);
  CHECK(days.total_weight() == 40);
  // A singleton centroid reproduces its day in MW.
  for (size_t c = 0; c < days.days.size(); ++c) {
    const int member = static_cast<int>(
        std::find(singles.assignment.begin(), singles.assignment.end(), static_cast<int>(c)) -
        singles.assignment.begin());
    for (int h = 0; h < kHoursPerDay; ++h) {
      CHECK(std::abs(days.days[c].beta[0][h] * set.layout.load_reference[0] -
                     history.load_at(member, h, 0)) <= 1e-9);
      CHECK(std::abs(days.days[c].alpha[1][h] * set.layout.wind_reference[1] -
                     history.wind_at(member, h, 1)) <= 1e-9);
    }
  }

  auto ten = to_representative_days(tkm(points, 10, 3), set.scaling, set.layout);
  CHECK(ten.days.size() == 10);
  CHECK(ten.total_weight() == 40);
  for (const auto& d : ten.days) {
    CHECK(d.beta.size() == 2);
    CHECK(d.alpha.size() == 2);
    for (const auto& zone : d.beta)
      for (double v : zone) CHECK((v >= 0.0 && v <= 1.0));
    for (const auto& zone : d.alpha)
      for (double v : zone) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("cluster_history: MKM 5x2 gives ten days, TKM 1 gives the mean day") {
  auto history = small_history(60, 9);
  ClusterSpec spec;
  spec.method = ClusterMethod::Mkm;
  spec.k1 = 5;
  spec.k2 = 2;
  spec.k = 10;
  spec.seed = 4;
  auto mkm_days = cluster_history(history, spec);
  CHECK(mkm_days.days.size() == 10);
  CHECK(mkm_days.total_weight() == 60);

  ClusterSpec one;
  one.k = 1;
  auto mean = cluster_history(history, one);
  REQUIRE(mean.days.size() == 1);
  CHECK(mean.days[0].weight == 60);
  auto layout = feature_layout(history);
  for (int h = 0; h < kHoursPerDay; ++h) {
    double s = 0.0;
    for (size_t d = 0; d < 60; ++d) s += history.load_at(d, h, 1);
    CHECK(mean.days[0].beta[1][h] * layout.load_reference[1] == doctest::Approx(s / 60.0).epsilon(1e-12));
  }
}

TEST_CASE("representative-day CSV round trip") {
  auto history = small_history(15, 2);
  ClusterSpec spec;
  spec.k = 3;
  auto days = cluster_history(history, spec);
  const std::string text = format_representative_days(days);
  CHECK(text.rfind("rep_day,weight,zone,feature,hour,value_pu\n", 0) == 0);
  auto back = parse_representative_days(text);
  CHECK(back.days.size() == 3);
  CHECK(back.total_weight() == 15);
  CHECK(format_representative_days(back) == text);
  for (size_t r = 0; r < 3; ++r)
    for (int h = 0; h < kHoursPerDay; ++h)
      CHECK(back.days[r].beta[0][h] == doctest::Approx(days.days[r].beta[0][h]).epsilon(1e-8));
}

TEST_CASE("history_days keeps chronological order with unit weights") {
  auto history = small_history(5, 1);
  auto days = history_days(history);
  REQUIRE(days.days.size() == 5);
  auto layout = feature_layout(history);
  for (size_t d = 0; d < 5; ++d) {
    CHECK(days.days[d].weight == 1);
    CHECK(days.days[d].beta[0][7] * layout.load_reference[0] ==
          doctest::Approx(history.load_at(d, 7, 0)).epsilon(1e-12));
  }
}
