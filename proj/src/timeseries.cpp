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

#include "repday/timeseries.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "repday/error.hpp"
#include "repday/random.hpp"

namespace repday {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string civil_label(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
  return fmt::format("{:04d}-{:02d}-{:02d}", y, m, d);
}

bool parse_uint(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Accepts YYYY-MM-DD[T| ]HH[:MM[:SS]][Z]; returns hours since the epoch.
std::int64_t parse_hour_stamp(std::string_view text, int line) {
  auto fail = [&]() -> std::int64_t {
    throw ParseError(fmt::format("invalid timestamp '{}'", text), line);
  };
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z'))
    text.remove_suffix(1);
  if (text.size() < 13 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' '))
    return fail();
  int y, mo, d, h, mi = 0, se = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), mo) ||
      !parse_uint(text.substr(8, 2), d) || !parse_uint(text.substr(11, 2), h))
    return fail();
  std::string_view rest = text.substr(13);
  if (!rest.empty()) {
    if (rest.size() < 3 || rest[0] != ':' || !parse_uint(rest.substr(1, 2), mi))
      return fail();
    rest.remove_prefix(3);
    if (!rest.empty()) {
      if (rest.size() != 3 || rest[0] != ':' || !parse_uint(rest.substr(1, 2), se))
        return fail();
    }
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23) return fail();
  if (mi != 0 || se != 0)
    throw ParseError(fmt::format("timestamp '{}' is not on the hour", text), line);
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 24 + h;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '"'))
      field.remove_prefix(1);
    while (!field.empty() &&
           (field.back() == ' ' || field.back() == '"' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_value(std::string_view field, const std::string& column, int line) {
  if (field.empty())
    throw ParseError(fmt::format("missing value in column '{}'", column), line);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v))
    throw ParseError(
        fmt::format("invalid number '{}' in column '{}'", field, column), line);
  if (v < 0.0)
    throw ParseError(
        fmt::format("negative value {} in column '{}'", v, column), line);
  return v;
}

}  // namespace

void HourlyRecordSet::check() const {
  if (load_zones.empty() || wind_zones.empty())
    throw ParameterError("history needs at least one load and one wind zone");
  const size_t hours = n_days() * kHoursPerDay;
  if (load.size() != hours * load_zones.size() ||
      wind.size() != hours * wind_zones.size())
    throw ParameterError("history arrays do not match 24 hours per day");
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  if (std::any_of(load.begin(), load.end(), bad) ||
      std::any_of(wind.begin(), wind.end(), bad))
    throw ParameterError("history contains negative or non-finite values");
  if (wind_units == WindUnits::PerUnit &&
      std::any_of(wind.begin(), wind.end(), [](double v) { return v > 1.0; }))
    throw ParameterError("per-unit wind values must not exceed 1");
}

HourlyRecordSet parse_hourly_csv(const std::string& text, const CsvSchema& schema) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header_line = line;
    break;
  }
  if (header_line.empty()) throw ParseError("empty CSV input", 0);
  header = split_commas(header_line);

  int ts_col = -1;
  std::vector<int> load_cols, wind_cols;
  HourlyRecordSet out;
  out.wind_units = schema.wind_units;
  for (size_t i = 0; i < header.size(); ++i) {
    std::string name(header[i]);
    if (name == schema.timestamp_column) {
      ts_col = static_cast<int>(i);
    } else if (name.rfind(schema.load_prefix, 0) == 0 &&
               name.size() > schema.load_prefix.size()) {
      load_cols.push_back(static_cast<int>(i));
      out.load_zones.push_back(name.substr(schema.load_prefix.size()));
    } else if (name.rfind(schema.wind_prefix, 0) == 0 &&
               name.size() > schema.wind_prefix.size()) {
      wind_cols.push_back(static_cast<int>(i));
      out.wind_zones.push_back(name.substr(schema.wind_prefix.size()));
    }
  }
  if (ts_col < 0)
    throw ParseError(fmt::format("missing timestamp column '{}'", schema.timestamp_column), line_no);
  if (load_cols.empty() || wind_cols.empty())
    throw ParseError("CSV needs at least one load and one wind column", line_no);

  struct Row {
    std::int64_t stamp;
    int line;
    std::vector<double> load, wind;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_commas(line);
    if (fields.size() != header.size())
      throw ParseError(fmt::format("expected {} fields, found {}", header.size(),
                                   fields.size()),
                       line_no);
    Row row;
    row.line = line_no;
    row.stamp = parse_hour_stamp(fields[ts_col], line_no);
    for (size_t z = 0; z < load_cols.size(); ++z)
      row.load.push_back(parse_value(fields[load_cols[z]], std::string(header[load_cols[z]]), line_no));
    for (size_t z = 0; z < wind_cols.size(); ++z) {
      double v = parse_value(fields[wind_cols[z]], std::string(header[wind_cols[z]]), line_no);
      if (schema.wind_units == WindUnits::PerUnit && v > 1.0)
        throw ParseError(fmt::format("per-unit wind value {} exceeds 1", v), line_no);
      row.wind.push_back(v);
    }
    if (!rows.empty()) {
      std::int64_t prev = rows.back().stamp;
      if (row.stamp == prev)
        throw ParseError("duplicated timestamp", line_no);
      if (row.stamp < prev)
        throw ParseError("timestamps are not in chronological order", line_no);
      if (row.stamp != prev + 1)
        throw ParseError(fmt::format("gap of {} missing hours before this row",
                                     row.stamp - prev - 1),
                         line_no);
    }
    rows.push_back(std::move(row));
  }

  // Rows are contiguous, so only the first and last day can be partial.
  size_t first = 0;
  while (first < rows.size() && ((rows[first].stamp % 24) + 24) % 24 != 0) ++first;
  if (first > 0) ++out.dropped_partial_days;
  size_t usable = (rows.size() - first) / kHoursPerDay;
  if (first + usable * kHoursPerDay < rows.size()) ++out.dropped_partial_days;

  for (size_t d = 0; d < usable; ++d) {
    const Row& start = rows[first + d * kHoursPerDay];
    std::int64_t day = start.stamp >= 0 ? start.stamp / 24 : (start.stamp - 23) / 24;
    out.day_labels.push_back(civil_label(day));
    for (int h = 0; h < kHoursPerDay; ++h) {
      const Row& r = rows[first + d * kHoursPerDay + h];
      out.load.insert(out.load.end(), r.load.begin(), r.load.end());
      out.wind.insert(out.wind.end(), r.wind.begin(), r.wind.end());
    }
  }
  return out;
}

HourlyRecordSet load_hourly_csv(const std::filesystem::path& path,
                                const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_hourly_csv(buffer.str(), schema);
}

void write_hourly_csv(const std::filesystem::path& path,
                      const HourlyRecordSet& records) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << "timestamp";
  for (const auto& z : records.load_zones) out << ",load_" << z;
  for (const auto& z : records.wind_zones) out << ",wind_" << z;
  out << '\n';
  for (size_t d = 0; d < records.n_days(); ++d) {
    for (int h = 0; h < kHoursPerDay; ++h) {
      out << fmt::format("{}T{:02d}:00", records.day_labels[d], h);
      for (size_t z = 0; z < records.load_zones.size(); ++z)
        out << ',' << fmt::format("{:.3f}", records.load_at(d, h, z));
      for (size_t z = 0; z < records.wind_zones.size(); ++z)
        out << ',' << fmt::format("{:.3f}", records.wind_at(d, h, z));
      out << '\n';
    }
  }
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

NormalizedVectors normalize(std::span<const std::vector<double>> raw) {
  if (raw.empty()) throw ParameterError("cannot normalize an empty set");
  const size_t dim = raw.front().size();
  NormalizedVectors out;
  out.scaling.min.assign(raw.front().begin(), raw.front().end());
  out.scaling.max = out.scaling.min;
  for (const auto& v : raw) {
    if (v.size() != dim) throw ParameterError("vectors differ in length");
    for (size_t i = 0; i < dim; ++i) {
      out.scaling.min[i] = std::min(out.scaling.min[i], v[i]);
      out.scaling.max[i] = std::max(out.scaling.max[i], v[i]);
    }
  }
  out.vectors.reserve(raw.size());
  for (const auto& v : raw) out.vectors.push_back(normalize_one(v, out.scaling));
  return out;
}

std::vector<double> normalize_one(std::span<const double> raw,
                                  const ScalingParams& scaling) {
  std::vector<double> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    const double span = scaling.max[i] - scaling.min[i];
    out[i] = span > 0.0 ? (raw[i] - scaling.min[i]) / span : 0.0;
  }
  return out;
}

std::vector<double> denormalize(std::span<const double> normalized,
                                const ScalingParams& scaling) {
  std::vector<double> out(normalized.size());
  for (size_t i = 0; i < normalized.size(); ++i) {
    const double span = scaling.max[i] - scaling.min[i];
    out[i] = span > 0.0 ? scaling.min[i] + normalized[i] * span : scaling.min[i];
  }
  return out;
}

FeatureLayout feature_layout(const HourlyRecordSet& records) {
  FeatureLayout layout;
  layout.load_zones = records.load_zones;
  layout.wind_zones = records.wind_zones;
  layout.load_reference.assign(records.load_zones.size(), 0.0);
  layout.wind_reference.assign(records.wind_zones.size(), 0.0);
  for (size_t d = 0; d < records.n_days(); ++d) {
    for (int h = 0; h < kHoursPerDay; ++h) {
      for (size_t z = 0; z < records.load_zones.size(); ++z)
        layout.load_reference[z] = std::max(layout.load_reference[z], records.load_at(d, h, z));
      for (size_t z = 0; z < records.wind_zones.size(); ++z)
        layout.wind_reference[z] = std::max(layout.wind_reference[z], records.wind_at(d, h, z));
    }
  }
  // All-zero zones keep a unit reference so factors stay 0.
  for (double& ref : layout.load_reference)
    if (ref <= 0.0) ref = 1.0;
  for (double& ref : layout.wind_reference)
    if (ref <= 0.0 || records.wind_units == WindUnits::PerUnit) ref = 1.0;
  return layout;
}

std::vector<double> raw_day_vector(const HourlyRecordSet& records, size_t day) {
  std::vector<double> v;
  v.reserve((records.load_zones.size() + records.wind_zones.size()) * kHoursPerDay);
  for (size_t z = 0; z < records.load_zones.size(); ++z)
    for (int h = 0; h < kHoursPerDay; ++h) v.push_back(records.load_at(day, h, z));
  for (size_t z = 0; z < records.wind_zones.size(); ++z)
    for (int h = 0; h < kHoursPerDay; ++h) v.push_back(records.wind_at(day, h, z));
  return v;
}

ObservationSet build_day_observations(const HourlyRecordSet& records) {
  records.check();
  if (records.n_days() == 0) throw ParameterError("history contains no complete day");
  std::vector<std::vector<double>> raw;
  raw.reserve(records.n_days());
  for (size_t d = 0; d < records.n_days(); ++d) raw.push_back(raw_day_vector(records, d));
  NormalizedVectors normalized = normalize(raw);

  ObservationSet set;
  set.n_features = records.load_zones.size() + records.wind_zones.size();
  set.layout = feature_layout(records);
  set.scaling = std::move(normalized.scaling);
  set.observations.reserve(raw.size());
  for (size_t d = 0; d < raw.size(); ++d)
    set.observations.push_back({d, std::move(normalized.vectors[d])});
  return set;
}

HourlyRecordSet synthesize_history(const SyntheticHistorySpec& spec) {
  if (spec.n_days <= 0) throw ParameterError("n_days must be positive");
  if (spec.load_zones.size() != spec.load_peaks.size() ||
      spec.wind_zones.size() != spec.wind_capacity.size())
    throw ParameterError("zone labels and magnitudes differ in length");

  constexpr double kTwoPi = 6.283185307179586;
  Rng rng(mix_seed(spec.seed));
  HourlyRecordSet out;
  out.load_zones = spec.load_zones;
  out.wind_zones = spec.wind_zones;
  out.wind_units = WindUnits::Megawatt;

  const std::int64_t jan1 = days_from_civil(spec.year, 1, 1);
  const size_t nl = spec.load_zones.size();
  const size_t nw = spec.wind_zones.size();

  // Slowly varying weather state shared by all zones, plus zone offsets.
  double weather = 0.0;
  std::vector<double> zone_weather(nw, 0.0);
  std::vector<double> hourly_wind(nw, 0.0);
  double temperature = 0.0;

  for (int d = 0; d < spec.n_days; ++d) {
    const std::int64_t day = jan1 + spec.first_day_of_year + d;
    out.day_labels.push_back(civil_label(day));
    const int weekday = static_cast<int>(((day % 7) + 7 + 3) % 7);  // 0 = Monday
    const double doy = static_cast<double>(spec.first_day_of_year + d);
    const double season = std::cos(kTwoPi * (doy - 15.0) / 366.0);

    temperature = 0.7 * temperature + 0.3 * standard_normal(rng);
    weather = 0.75 * weather + 0.66 * standard_normal(rng);
    for (size_t z = 0; z < nw; ++z)
      zone_weather[z] = 0.5 * zone_weather[z] + 0.5 * standard_normal(rng);

    const double day_level = (0.80 + 0.10 * season) *
                             (weekday >= 5 ? 0.86 : 1.0) *
                             (1.0 + 0.035 * temperature);
    for (int h = 0; h < kHoursPerDay; ++h) {
      const double t = static_cast<double>(h);
      // Night trough, morning ramp, evening peak (stronger in winter).
      const double shape = 0.70 + 0.18 * std::exp(-0.5 * std::pow((t - 10.0) / 3.0, 2)) +
                           (0.22 + 0.06 * season) * std::exp(-0.5 * std::pow((t - 18.0) / 2.2, 2)) +
                           0.08 * std::sin(kTwoPi * (t - 6.0) / 24.0);
      for (size_t z = 0; z < nl; ++z) {
        const double zone_shift = z == 0 ? 1.0 : 0.97 + 0.02 * std::cos(kTwoPi * t / 24.0);
        double v = spec.load_peaks[z] * day_level * shape * zone_shift *
                   (1.0 + 0.012 * standard_normal(rng));
        out.load.push_back(std::max(0.0, v));
      }
    }
    for (int h = 0; h < kHoursPerDay; ++h) {
      const double diurnal = 0.15 * std::sin(kTwoPi * (static_cast<double>(h) - 9.0) / 24.0);
      for (size_t z = 0; z < nw; ++z) {
        hourly_wind[z] = 0.85 * hourly_wind[z] + 0.3 * standard_normal(rng);
        const double z_scale = z == 0 ? 0.35 : -0.05;
        const double latent = 0.25 * season + 1.25 * weather + 0.55 * zone_weather[z] +
                              hourly_wind[z] + diurnal + z_scale - 0.4;
        const double cf = 1.0 / (1.0 + std::exp(-1.6 * latent));
        out.wind.push_back(spec.wind_capacity[z] * std::clamp(cf, 0.0, 0.97));
      }
    }
  }
  // Values are stored rounded, exactly as the CSV writer prints them.
  for (double& v : out.load) v = std::round(v * 1000.0) / 1000.0;
  for (double& v : out.wind) v = std::round(v * 1000.0) / 1000.0;
  return out;
}

}  // namespace repday
