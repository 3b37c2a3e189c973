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

#ifndef REPDAY_TIMESERIES_HPP
#define REPDAY_TIMESERIES_HPP

// Hourly load/wind history and the per-day observation vectors that feed the
// clustering algorithms.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace repday {

inline constexpr int kHoursPerDay = 24;

enum class WindUnits {
  Megawatt,  // wind columns in MW; per-unit factors use the zone's peak
  PerUnit,   // wind columns already a fraction of installed capacity
};

struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::string load_prefix = "load_";
  std::string wind_prefix = "wind_";
  WindUnits wind_units = WindUnits::Megawatt;
};

// Whole days of hourly data. Values are stored [day][hour][zone], zone
// fastest.
struct HourlyRecordSet {
  std::vector<std::string> load_zones;
  std::vector<std::string> wind_zones;
  std::vector<std::string> day_labels;  // ISO date of each day
  std::vector<double> load;             // MW
  std::vector<double> wind;             // MW or per unit, see wind_units
  WindUnits wind_units = WindUnits::Megawatt;
  int dropped_partial_days = 0;         // leading/trailing days discarded

  std::size_t n_days() const { return day_labels.size(); }
  double load_at(std::size_t day, int hour, std::size_t zone) const {
    return load[(day * kHoursPerDay + hour) * load_zones.size() + zone];
  }
  double wind_at(std::size_t day, int hour, std::size_t zone) const {
    return wind[(day * kHoursPerDay + hour) * wind_zones.size() + zone];
  }

  // Throws ParameterError when shapes or value ranges are inconsistent.
  void check() const;
};

HourlyRecordSet load_hourly_csv(const std::filesystem::path& path,
                                const CsvSchema& schema = {});
HourlyRecordSet parse_hourly_csv(const std::string& text,
                                 const CsvSchema& schema = {});
void write_hourly_csv(const std::filesystem::path& path,
                      const HourlyRecordSet& records);

struct DayObservation {
  std::size_t day_index = 0;
  std::vector<double> vector;
};

struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;
  bool is_constant(std::size_t dim) const { return max[dim] == min[dim]; }
};

// Zone labels in feature order plus the per-zone reference used to turn MW
// into per-unit factors (historical peak for load and MW wind, 1 otherwise).
struct FeatureLayout {
  std::vector<std::string> load_zones;
  std::vector<std::string> wind_zones;
  std::vector<double> load_reference;
  std::vector<double> wind_reference;

  std::size_t n_features() const { return load_zones.size() + wind_zones.size(); }
  std::size_t dimension() const { return n_features() * kHoursPerDay; }
};

struct ObservationSet {
  std::vector<DayObservation> observations;  // normalized
  ScalingParams scaling;
  std::size_t n_features = 0;
  FeatureLayout layout;
};

struct NormalizedVectors {
  std::vector<std::vector<double>> vectors;
  ScalingParams scaling;
};

// Per-dimension min-max scaling to [0, 1]; constant dimensions map to 0.
NormalizedVectors normalize(std::span<const std::vector<double>> raw);
std::vector<double> normalize_one(std::span<const double> raw,
                                  const ScalingParams& scaling);
std::vector<double> denormalize(std::span<const double> normalized,
                                const ScalingParams& scaling);

FeatureLayout feature_layout(const HourlyRecordSet& records);

// Raw (MW) vector of one day: load zones first, then wind zones, 24 hours
// per zone.
std::vector<double> raw_day_vector(const HourlyRecordSet& records,
                                   std::size_t day);

ObservationSet build_day_observations(const HourlyRecordSet& records);

// Synthetic history with Danish-style statistics: two load zones with a
// daily double-peak and seasonal swing, two wind zones driven by a
// persistent weather process.
struct SyntheticHistorySpec {
  int year = 2016;
  int first_day_of_year = 0;  // 0 = January 1st
  int n_days = 366;
  std::vector<std::string> load_zones{"west", "east"};
  std::vector<double> load_peaks{3700.0, 2600.0};
  std::vector<std::string> wind_zones{"north", "south"};
  std::vector<double> wind_capacity{3000.0, 1300.0};
  std::uint64_t seed = 2016;
};

HourlyRecordSet synthesize_history(const SyntheticHistorySpec& spec);

}  // namespace repday

#endif  // REPDAY_TIMESERIES_HPP
