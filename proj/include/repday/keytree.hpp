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

#ifndef REPDAY_KEYTREE_HPP
#define REPDAY_KEYTREE_HPP

// Reader/writer for the key-tree text format used by system files, run
// configurations and manifests. The format is the TOML subset below:
//
//   # comment
//   key = 1.5              numbers (integers or floats), true/false, "strings"
//   [section]              named table
//   [[items]]              one element of an array of tables
//   list = [1, 2, "a"]     inline array of scalars (single line)
//
// Keys are bare words ([A-Za-z0-9_-]+). Duplicate keys and duplicate
// [section] headers are rejected.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repday {

struct KeyScalar {
  enum class Kind { Bool, Number, String };
  Kind kind = Kind::Number;
  bool boolean = false;
  double number = 0.0;
  std::string text;  // string payload, or the literal spelling of a number
};

struct KeyValue {
  bool is_array = false;
  KeyScalar scalar;
  std::vector<KeyScalar> items;
  int line = 0;
};

class KeyTable {
 public:
  // `path` names this table in diagnostics, e.g. "generators[2]".
  explicit KeyTable(std::string path = "", int line = 0)
      : path_(std::move(path)), line_(line) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, KeyValue>& values() const { return values_; }

  void set(const std::string& key, KeyValue value);
  void set_number(const std::string& key, double value);
  void set_string(const std::string& key, std::string value);
  void set_bool(const std::string& key, bool value);
  void set_numbers(const std::string& key, const std::vector<double>& values);
  void set_strings(const std::string& key,
                   const std::vector<std::string>& values);

  // Typed accessors; wrong type or missing key raises SchemaError naming
  // "<path>.<key>".
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, std::string fallback) const;
  bool boolean(const std::string& key) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  // Raises SchemaError on the first key not in `allowed`.
  void require_known_keys(const std::vector<std::string>& allowed) const;

 private:
  const KeyValue& lookup(const std::string& key) const;

  std::string path_;
  int line_;
  std::map<std::string, KeyValue> values_;
};

struct KeyTree {
  KeyTable root{"", 0};
  std::map<std::string, KeyTable> tables;
  std::map<std::string, std::vector<KeyTable>> arrays;

  const KeyTable* table(const std::string& name) const;
  KeyTable& table_mut(const std::string& name);
  const std::vector<KeyTable>& array(const std::string& name) const;
};

KeyTree parse_keytree(std::string_view text);
KeyTree load_keytree(const std::filesystem::path& path);

// Canonical serialization: root keys, then tables, then arrays of tables,
// each in key order. Numbers use the shortest round-trip decimal form.
std::string format_keytree(const KeyTree& tree);

}  // namespace repday

#endif  // REPDAY_KEYTREE_HPP
