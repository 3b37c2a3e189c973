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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "repday/error.hpp"
#include "repday/timeseries.hpp"

using namespace repday;

namespace {

// Hourly CSV with `hours` rows starting at 2016-01-01T00:00.
std::string hourly_csv(int hours, int first_hour = 0) {
  std::string text = "timestamp,load_west,wind_north\n";
  for (int t = first_hour; t < first_hour + hours; ++t) {
    const int day = t / 24;
    text += fmt::format("2016-01-{:02d}T{:02d}:00,{},{}\n", day + 1, t % 24, 100 + t, t % 7);
  }
  return text;
}

}  // namespace

TEST_CASE("whole days are grouped and partial days dropped") {
  auto two = parse_hourly_csv(hourly_csv(48));
  CHECK(two.n_days() == 2);
  CHECK(two.dropped_partial_days == 0);
  CHECK(two.load_at(1, 5, 0) == 100 + 29);
  CHECK(two.wind_at(0, 3, 0) == 3);

  auto trailing = parse_hourly_csv(hourly_csv(50));
  CHECK(trailing.n_days() == 2);
  CHECK(trailing.dropped_partial_days == 1);

  auto leading = parse_hourly_csv(hourly_csv(46, 2));
  CHECK(leading.n_days() == 1);
  CHECK(leading.dropped_partial_days == 1);
  CHECK(leading.day_labels[0] == "2016-01-02");
}

TEST_CASE("a leap year of hourly rows gives 366 days") {
  SyntheticHistorySpec spec;
  spec.load_zones = {"west"};
  spec.load_peaks = {1000};
  spec.wind_zones = {"north"};
  spec.wind_capacity = {500};
  auto year = synthesize_history(spec);
  CHECK(year.n_days() == 366);
  CHECK(year.load.size() == 8784);
  CHECK(year.day_labels.back() == "2016-12-31");
}

TEST_CASE("malformed rows are rejected with a line number") {
  std::string text = hourly_csv(24);
  text.replace(text.find(",104,"), 5, ",abc,");
  try {
    parse_hourly_csv(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }

  std::string negative = hourly_csv(24);
  negative.replace(negative.find(",104,"), 5, ",-4,");
  CHECK_THROWS_AS(parse_hourly_csv(negative), ParseError);

  std::string duplicated = hourly_csv(24) + "2016-01-01T23:00,1,1\n";
  CHECK_THROWS_AS(parse_hourly_csv(duplicated), ParseError);

  std::string gap = hourly_csv(48);
  const auto pos = gap.find("2016-01-01T05:00");
  gap.erase(pos, gap.find('\n', pos) - pos + 1);
  CHECK_THROWS_AS(parse_hourly_csv(gap), ParseError);

  CHECK_THROWS_AS(parse_hourly_csv("timestamp,load_west\n"), ParseError);
}

TEST_CASE("observations use zone-major layout with 24 hours per zone") {
  auto records = parse_hourly_csv(hourly_csv(48));
  auto set = build_day_observations(records);
  REQUIRE(set.observations.size() == 2);
  CHECK(set.observations[0].vector.size() == 48);
  CHECK(set.n_features == 2);

  auto raw = raw_day_vector(records, 1);
  CHECK(raw[0] == records.load_at(1, 0, 0));
  CHECK(raw[23] == records.load_at(1, 23, 0));
  CHECK(raw[24] == records.wind_at(1, 0, 0));

  SyntheticHistorySpec spec;
  spec.n_days = 20;
  auto danish = synthesize_history(spec);
  auto danish_set = build_day_observations(danish);
  CHECK(danish_set.observations.size() == 20);
  CHECK(danish_set.observations[0].vector.size() == 96);
  for (size_t d = 0; d < 20; ++d) CHECK(danish_set.observations[d].day_index == d);
}

TEST_CASE("min-max normalization") {
  std::vector<std::vector<double>> raw{{0.0, 100.0, 7.0}, {200.0, 100.0, 3.0}, {50.0, 100.0, 5.0}};
  auto n = normalize(raw);
  CHECK(n.vectors[2][0] == 0.25);
  CHECK(n.vectors[1][0] == 1.0);
  CHECK(n.vectors[0][0] == 0.0);
  CHECK(n.scaling.is_constant(1));
  for (const auto& v : n.vectors) CHECK(v[1] == 0.0);
  auto back = denormalize(n.vectors[0], n.scaling);
  CHECK(back[1] == 100.0);
}

TEST_CASE("normalization round trip and monotonicity on random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  std::vector<std::vector<double>> raw(100, std::vector<double>(12));
  for (auto& v : raw)
    for (auto& x : v) x = u(rng);
  for (auto& v : raw) v[5] = 42.0;
  auto n = normalize(raw);
  double worst = 0.0;
  for (size_t i = 0; i < raw.size(); ++i) {
    for (double x : n.vectors[i]) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
    auto back = denormalize(n.vectors[i], n.scaling);
    for (size_t k = 0; k < raw[i].size(); ++k) {
      // Oracle: the affine map recomputed from the data's own extremes.
      double lo = raw[0][k], hi = raw[0][k];
      for (const auto& v : raw) {
        lo = std::min(lo, v[k]);
        hi = std::max(hi, v[k]);
      }
      const double expected = hi == lo ? 0.0 : (raw[i][k] - lo) / (hi - lo);
      CHECK(n.vectors[i][k] == doctest::Approx(expected).epsilon(1e-15));
      worst = std::max(worst, std::abs(back[k] - raw[i][k]));
    }
  }
  CHECK(worst <= 1e-12);

  for (size_t i = 0; i + 1 < raw.size(); ++i) {
    for (size_t k = 0; k < 12; ++k) {
      if (raw[i][k] <= raw[i + 1][k]) CHECK(n.vectors[i][k] <= n.vectors[i + 1][k]);
    }
  }
}

TEST_CASE("synthetic history is deterministic and respects zone limits") {
  SyntheticHistorySpec spec;
  spec.n_days = 30;
  auto a = synthesize_history(spec);
  auto b = synthesize_history(spec);
  CHECK(a.load == b.load);
  CHECK(a.wind == b.wind);
  for (size_t d = 0; d < a.n_days(); ++d)
    for (int h = 0; h < kHoursPerDay; ++h) {
      CHECK(a.load_at(d, h, 0) <= spec.load_peaks[0] + 1e-9);
      CHECK(a.wind_at(d, h, 1) <= spec.wind_capacity[1] + 1e-9);
      CHECK(a.wind_at(d, h, 1) >= 0.0);
    }
  spec.seed = 99;
  auto c = synthesize_history(spec);
  CHECK(c.load != a.load);
}
