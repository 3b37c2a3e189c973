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

#include "repday/clustering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "file_util.hpp"
#include "repday/error.hpp"
#include "repday/random.hpp"

namespace repday {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::vector<int> assign(std::span<const Point> observations,
                        std::span<const Point> centroids) {
  if (centroids.empty()) throw ParameterError("assign needs at least one centroid");
  std::vector<int> out(observations.size(), 0);
  for (size_t i = 0; i < observations.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < centroids.size(); ++k) {
      if (centroids[k].empty()) continue;
      const double d = squared_distance(observations[i], centroids[k]);
      if (d < best) {
        best = d;
        out[i] = static_cast<int>(k);
      }
    }
  }
  return out;
}

std::vector<Point> recompute_centroids(std::span<const Point> observations,
                                       std::span<const int> assignment, int k) {
  if (assignment.size() != observations.size())
    throw ParameterError("assignment does not cover every observation");
  const size_t dim = observations.empty() ? 0 : observations.front().size();
  std::vector<Point> sums(static_cast<size_t>(k), Point(dim, 0.0));
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (size_t i = 0; i < observations.size(); ++i) {
    const int c = assignment[i];
    if (c < 0 || c >= k) throw ParameterError("assignment refers to an unknown cluster");
    ++counts[c];
    for (size_t j = 0; j < dim; ++j) sums[c][j] += observations[i][j];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      sums[c].clear();
      continue;
    }
    for (double& v : sums[c]) v /= counts[c];
  }
  return sums;
}

double total_sse(std::span<const Point> observations,
                 std::span<const Point> centroids,
                 std::span<const int> assignment) {
  double sse = 0.0;
  for (size_t i = 0; i < observations.size(); ++i)
    sse += squared_distance(observations[i], centroids[assignment[i]]);
  return sse;
}

namespace {

std::vector<int> member_counts(std::span<const int> assignment, int k) {
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (int c : assignment) ++counts[c];
  return counts;
}

// Gives every empty cluster the observation farthest from its own centroid,
// taken from a cluster that keeps at least one member.
void repair_empty_clusters(std::span<const Point> observations,
                           std::vector<Point>& centroids,
                           std::vector<int>& assignment, int k) {
  std::vector<int> counts = member_counts(assignment, k);
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    int farthest = -1;
    double best = -1.0;
    for (size_t i = 0; i < observations.size(); ++i) {
      if (counts[assignment[i]] < 2) continue;
      const double d = squared_distance(observations[i], centroids[assignment[i]]);
      if (d > best) {
        best = d;
        farthest = static_cast<int>(i);
      }
    }
    --counts[assignment[farthest]];
    assignment[farthest] = c;
    counts[c] = 1;
    centroids[c] = observations[farthest];
  }
}

void check_observations(std::span<const Point> observations) {
  if (observations.empty()) throw ParameterError("no observations to cluster");
  const size_t dim = observations.front().size();
  for (const auto& p : observations)
    if (p.size() != dim) throw ParameterError("observations differ in dimension");
}

}  // namespace

ClusteringResult tkm(std::span<const Point> observations, int k,
                     std::uint64_t seed, int max_iterations) {
  check_observations(observations);
  const int n = static_cast<int>(observations.size());
  if (k <= 0) throw ParameterError(fmt::format("K must be positive, got {}", k));
  if (k > n)
    throw ParameterError(fmt::format(
        "K = {} exceeds the number of observations ({})", k, n));
  if (max_iterations <= 0) throw ParameterError("max_iter must be positive");

  ClusteringResult result;
  result.seed = seed;

  // Initial centroids: k distinct observations, seeded draw without
  // replacement (partial Fisher-Yates).
  Rng rng(seed);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(order[i], order[j]);
  }
  std::vector<Point> centroids;
  centroids.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) centroids.push_back(observations[order[i]]);

  std::vector<int> assignment = assign(observations, centroids);
  while (true) {
    repair_empty_clusters(observations, centroids, assignment, k);
    centroids = recompute_centroids(observations, assignment, k);
    result.sse_trace.push_back(total_sse(observations, centroids, assignment));
    ++result.iterations;
    std::vector<int> next = assign(observations, centroids);
    if (next == assignment) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iterations) break;
    assignment = std::move(next);
  }
  result.counts = member_counts(assignment, k);
  result.sse = result.sse_trace.back();
  result.assignment = std::move(assignment);
  result.centroids = std::move(centroids);
  return result;
}

ClusteringResult mkm(std::span<const Point> observations, int k1, int k2,
                     std::uint64_t seed, int max_iterations) {
  check_observations(observations);
  if (k2 <= 0) throw ParameterError(fmt::format("K2 must be positive, got {}", k2));
  ClusteringResult stage_one = tkm(observations, k1, seed, max_iterations);
  for (int c = 0; c < k1; ++c) {
    if (stage_one.counts[c] < k2)
      throw PreconditionError(fmt::format(
          "stage-one cluster {} has {} member(s), fewer than K2 = {}", c,
          stage_one.counts[c], k2));
  }

  ClusteringResult result;
  result.seed = seed;
  result.stage_one_sse = stage_one.sse;
  result.iterations = stage_one.iterations;
  result.converged = stage_one.converged;
  result.assignment.assign(observations.size(), -1);
  result.centroids.resize(static_cast<size_t>(k1) * k2);
  result.counts.assign(static_cast<size_t>(k1) * k2, 0);

  for (int c = 0; c < k1; ++c) {
    std::vector<int> members;
    std::vector<Point> subset;
    for (size_t i = 0; i < observations.size(); ++i) {
      if (stage_one.assignment[i] == c) {
        members.push_back(static_cast<int>(i));
        subset.push_back(observations[i]);
      }
    }
    ClusteringResult sub = tkm(subset, k2, derive_seed(seed, static_cast<std::uint64_t>(c)),
                               max_iterations);
    result.iterations += sub.iterations;
    result.converged = result.converged && sub.converged;
    result.sse += sub.sse;
    for (int j = 0; j < k2; ++j) {
      result.centroids[c * k2 + j] = std::move(sub.centroids[j]);
      result.counts[c * k2 + j] = sub.counts[j];
    }
    for (size_t m = 0; m < members.size(); ++m)
      result.assignment[members[m]] = c * k2 + sub.assignment[m];
  }
  result.sse_trace = {stage_one.sse, result.sse};
  return result;
}

std::vector<Point> observation_points(const ObservationSet& set) {
  std::vector<Point> points;
  points.reserve(set.observations.size());
  for (const auto& o : set.observations) points.push_back(o.vector);
  return points;
}

const char* method_name(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::Tkm:
      return "tkm";
    case ClusterMethod::Mkm:
      return "mkm";
    case ClusterMethod::History:
      return "history";
  }
  return "?";
}

ClusterMethod parse_method(const std::string& name) {
  if (name == "tkm" || name == "TKM") return ClusterMethod::Tkm;
  if (name == "mkm" || name == "MKM") return ClusterMethod::Mkm;
  if (name == "history") return ClusterMethod::History;
  throw ParameterError(fmt::format("unknown clustering method '{}'", name));
}

int RepresentativeDaySet::total_weight() const {
  int total = 0;
  for (const auto& d : days) total += d.weight;
  return total;
}

RepresentativeDaySet to_representative_days(const ClusteringResult& result,
                                            const ScalingParams& scaling,
                                            const FeatureLayout& layout) {
  const size_t nl = layout.load_zones.size();
  const size_t nw = layout.wind_zones.size();
  RepresentativeDaySet set;
  set.load_zones = layout.load_zones;
  set.wind_zones = layout.wind_zones;
  set.k = static_cast<int>(result.centroids.size());
  for (size_t r = 0; r < result.centroids.size(); ++r) {
    if (result.counts[r] <= 0 || result.centroids[r].empty())
      throw PreconditionError(fmt::format("cluster {} is empty", r));
    const std::vector<double> raw = denormalize(result.centroids[r], scaling);
    if (raw.size() != layout.dimension())
      throw ParameterError("centroid dimension does not match the feature layout");
    RepresentativeDay day;
    day.weight = result.counts[r];
    day.beta.assign(nl, std::vector<double>(kHoursPerDay));
    day.alpha.assign(nw, std::vector<double>(kHoursPerDay));
    for (size_t z = 0; z < nl; ++z)
      for (int h = 0; h < kHoursPerDay; ++h)
        day.beta[z][h] = std::clamp(raw[z * kHoursPerDay + h] / layout.load_reference[z], 0.0, 1.0);
    for (size_t z = 0; z < nw; ++z)
      for (int h = 0; h < kHoursPerDay; ++h)
        day.alpha[z][h] = std::clamp(raw[(nl + z) * kHoursPerDay + h] / layout.wind_reference[z], 0.0, 1.0);
    set.days.push_back(std::move(day));
  }
  return set;
}

RepresentativeDaySet history_days(const HourlyRecordSet& records) {
  records.check();
  const FeatureLayout layout = feature_layout(records);
  RepresentativeDaySet set;
  set.load_zones = records.load_zones;
  set.wind_zones = records.wind_zones;
  set.method = ClusterMethod::History;
  set.k = static_cast<int>(records.n_days());
  for (size_t d = 0; d < records.n_days(); ++d) {
    RepresentativeDay day;
    day.weight = 1;
    day.beta.assign(records.load_zones.size(), std::vector<double>(kHoursPerDay));
    day.alpha.assign(records.wind_zones.size(), std::vector<double>(kHoursPerDay));
    for (int h = 0; h < kHoursPerDay; ++h) {
      for (size_t z = 0; z < records.load_zones.size(); ++z)
        day.beta[z][h] = records.load_at(d, h, z) / layout.load_reference[z];
      for (size_t z = 0; z < records.wind_zones.size(); ++z)
        day.alpha[z][h] = records.wind_at(d, h, z) / layout.wind_reference[z];
    }
    set.days.push_back(std::move(day));
  }
  return set;
}

std::string format_representative_days(const RepresentativeDaySet& set) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "rep_day,weight,zone,feature,hour,value_pu\n");
  for (size_t r = 0; r < set.days.size(); ++r) {
    const auto& day = set.days[r];
    for (size_t z = 0; z < set.load_zones.size(); ++z)
      for (int h = 0; h < kHoursPerDay; ++h)
        fmt::format_to(std::back_inserter(out), "{},{},{},load,{},{:.9g}\n", r + 1,
                       day.weight, set.load_zones[z], h + 1, day.beta[z][h]);
    for (size_t z = 0; z < set.wind_zones.size(); ++z)
      for (int h = 0; h < kHoursPerDay; ++h)
        fmt::format_to(std::back_inserter(out), "{},{},{},wind,{},{:.9g}\n", r + 1,
                       day.weight, set.wind_zones[z], h + 1, day.alpha[z][h]);
  }
  return fmt::to_string(out);
}

void write_representative_days(const std::filesystem::path& path,
                               const RepresentativeDaySet& set) {
  detail::write_text_file(path, format_representative_days(set));
}

namespace {

template <typename T>
T parse_field(std::string_view s, int line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(fmt::format("invalid {} '{}'", what, s), line);
  return v;
}

}  // namespace

RepresentativeDaySet parse_representative_days(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  struct Entry {
    int weight = -1;
    std::map<std::pair<std::string, std::string>, std::vector<double>> series;
  };
  std::map<int, Entry> days;
  std::vector<std::string> load_zones, wind_zones;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "rep_day,weight,zone,feature,hour,value_pu")
        throw ParseError("unexpected representative-day header", line_no);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      size_t c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (f.size() != 6) throw ParseError("expected 6 fields", line_no);
    const int r = parse_field<int>(f[0], line_no, "rep_day");
    const int w = parse_field<int>(f[1], line_no, "weight");
    const std::string zone(f[2]);
    const std::string feature(f[3]);
    const int h = parse_field<int>(f[4], line_no, "hour");
    const double v = parse_field<double>(f[5], line_no, "value");
    if (r < 1) throw ParseError("rep_day must be >= 1", line_no);
    if (w < 1) throw ParseError("weight must be >= 1", line_no);
    if (h < 1 || h > kHoursPerDay) throw ParseError("hour must be in 1..24", line_no);
    if (feature != "load" && feature != "wind")
      throw ParseError(fmt::format("unknown feature '{}'", feature), line_no);
    if (v < 0.0 || v > 1.0) throw ParseError("value_pu outside [0, 1]", line_no);
    auto& zones = feature == "load" ? load_zones : wind_zones;
    if (std::find(zones.begin(), zones.end(), zone) == zones.end()) zones.push_back(zone);
    Entry& e = days[r];
    if (e.weight >= 0 && e.weight != w)
      throw ParseError(fmt::format("inconsistent weight for rep_day {}", r), line_no);
    e.weight = w;
    auto& series = e.series[{feature, zone}];
    if (series.empty()) series.assign(kHoursPerDay, -1.0);
    if (series[h - 1] >= 0.0) throw ParseError("duplicate entry", line_no);
    series[h - 1] = v;
  }
  if (!header_seen || days.empty()) throw ParseError("no representative days found", 0);

  RepresentativeDaySet set;
  set.load_zones = load_zones;
  set.wind_zones = wind_zones;
  int expected = 1;
  for (auto& [r, entry] : days) {
    if (r != expected++)
      throw ParseError(fmt::format("rep_day numbering has a gap before {}", r), 0);
    RepresentativeDay day;
    day.weight = entry.weight;
    for (const auto& z : load_zones) {
      auto it = entry.series.find({"load", z});
      if (it == entry.series.end() ||
          std::any_of(it->second.begin(), it->second.end(), [](double x) { return x < 0; }))
        throw ParseError(fmt::format("rep_day {} lacks complete load data for '{}'", r, z), 0);
      day.beta.push_back(it->second);
    }
    for (const auto& z : wind_zones) {
      auto it = entry.series.find({"wind", z});
      if (it == entry.series.end() ||
          std::any_of(it->second.begin(), it->second.end(), [](double x) { return x < 0; }))
        throw ParseError(fmt::format("rep_day {} lacks complete wind data for '{}'", r, z), 0);
      day.alpha.push_back(it->second);
    }
    set.days.push_back(std::move(day));
  }
  set.k = static_cast<int>(set.days.size());
  return set;
}

RepresentativeDaySet load_representative_days(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_representative_days(buffer.str());
}

}  // namespace repday
