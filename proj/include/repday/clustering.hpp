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

#ifndef REPDAY_CLUSTERING_HPP
#define REPDAY_CLUSTERING_HPP

// Traditional (Lloyd) K-means and the two-stage modified K-means over day
// observation vectors, and conversion of centroids into weighted
// representative days.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "repday/timeseries.hpp"

namespace repday {

inline constexpr int kDefaultMaxIterations = 300;

using Point = std::vector<double>;

struct ClusteringResult {
  std::vector<Point> centroids;       // normalized space
  std::vector<int> assignment;        // observation -> cluster
  std::vector<int> counts;            // members per cluster
  double sse = 0.0;                   // within-cluster squared distances
  std::vector<double> sse_trace;      // SSE after every centroid update
  int iterations = 0;
  bool converged = false;             // false: max_iter reached
  std::uint64_t seed = 0;
  // MKM only: SSE of the first-stage partition into K1 clusters.
  double stage_one_sse = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Nearest centroid by squared Euclidean distance; ties go to the lowest
// cluster index.
std::vector<int> assign(std::span<const Point> observations,
                        std::span<const Point> centroids);

// Mean of each cluster's members. A cluster with no member keeps an empty
// vector; callers repair it before use.
std::vector<Point> recompute_centroids(std::span<const Point> observations,
                                       std::span<const int> assignment, int k);

double total_sse(std::span<const Point> observations,
                 std::span<const Point> centroids,
                 std::span<const int> assignment);

ClusteringResult tkm(std::span<const Point> observations, int k,
                     std::uint64_t seed,
                     int max_iterations = kDefaultMaxIterations);

// Stage one: tkm(K1, seed). Stage two: tkm(K2, derive_seed(seed, c)) on the
// members of every stage-one cluster c, giving K1*K2 clusters numbered
// c*K2 + j.
ClusteringResult mkm(std::span<const Point> observations, int k1, int k2,
                     std::uint64_t seed,
                     int max_iterations = kDefaultMaxIterations);

std::vector<Point> observation_points(const ObservationSet& set);

enum class ClusterMethod { Tkm, Mkm, History };
const char* method_name(ClusterMethod method);
ClusterMethod parse_method(const std::string& name);

struct RepresentativeDay {
  int weight = 0;                         // sigma_r, in days
  std::vector<std::vector<double>> beta;  // [load zone][hour], per unit
  std::vector<std::vector<double>> alpha; // [wind zone][hour], per unit
};

struct RepresentativeDaySet {
  std::vector<RepresentativeDay> days;
  std::vector<std::string> load_zones;
  std::vector<std::string> wind_zones;
  ClusterMethod method = ClusterMethod::Tkm;
  int k = 0;
  int k1 = 0;
  int k2 = 0;

  int total_weight() const;
};

RepresentativeDaySet to_representative_days(const ClusteringResult& result,
                                            const ScalingParams& scaling,
                                            const FeatureLayout& layout);

// Every historical day as its own weight-1 day, in chronological order.
RepresentativeDaySet history_days(const HourlyRecordSet& records);

// rep_day,weight,zone,feature,hour,value_pu with 9 significant digits.
std::string format_representative_days(const RepresentativeDaySet& set);
void write_representative_days(const std::filesystem::path& path,
                               const RepresentativeDaySet& set);
RepresentativeDaySet parse_representative_days(const std::string& text);
RepresentativeDaySet load_representative_days(const std::filesystem::path& path);

}  // namespace repday

#endif  // REPDAY_CLUSTERING_HPP
