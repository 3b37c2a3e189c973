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

#include "repday/keytree.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "repday/error.hpp"

namespace repday {

namespace {

std::string qualified(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const char* kind_name(KeyScalar::Kind kind) {
  switch (kind) {
    case KeyScalar::Kind::Bool:
      return "boolean";
    case KeyScalar::Kind::Number:
      return "number";
    case KeyScalar::Kind::String:
      return "string";
  }
  return "?";
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  bool at_end_or_comment() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(fmt::format("expected '{}'", c));
  }

  std::string bare_key() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() && is_bare_key_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  // Table names may be dotted (kept verbatim as one name).
  std::string table_name() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (is_bare_key_char(text_[pos_]) || text_[pos_] == '.'))
      ++pos_;
    if (start == pos_) fail("expected a table name");
    return std::string(text_.substr(start, pos_ - start));
  }

  KeyScalar scalar() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a value");
    KeyScalar out;
    char c = text_[pos_];
    if (c == '"') {
      ++pos_;
      out.kind = KeyScalar::Kind::String;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated string");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= text_.size()) fail("unterminated escape");
          char esc = text_[pos_++];
          switch (esc) {
            case 'n': out.text.push_back('\n'); break;
            case 't': out.text.push_back('\t'); break;
            case '"': out.text.push_back('"'); break;
            case '\\': out.text.push_back('\\'); break;
            default: fail(fmt::format("unsupported escape '\\{}'", esc));
          }
        } else {
          out.text.push_back(ch);
        }
      }
      return out;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t')
      ++pos_;
    std::string token(text_.substr(start, pos_ - start));
    if (token == "true" || token == "false") {
      out.kind = KeyScalar::Kind::Bool;
      out.boolean = token == "true";
      out.text = token;
      return out;
    }
    std::string digits;
    digits.reserve(token.size());
    for (char ch : token)
      if (ch != '_') digits.push_back(ch);
    if (digits.empty()) fail("expected a value");
    const char* first = digits.data();
    if (*first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      fail(fmt::format("invalid value '{}'", token));
    out.kind = KeyScalar::Kind::Number;
    out.number = value;
    out.text = token;
    return out;
  }

  KeyValue value() {
    KeyValue out;
    out.line = line_;
    if (consume('[')) {
      out.is_array = true;
      if (consume(']')) return out;
      while (true) {
        out.items.push_back(scalar());
        if (consume(']')) break;
        expect(',');
        if (consume(']')) break;  // trailing comma
      }
      return out;
    }
    out.scalar = scalar();
    return out;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_);
  }

 private:
  std::string_view text_;
  int line_;
  size_t pos_ = 0;
};

std::string format_scalar(const KeyScalar& s) {
  switch (s.kind) {
    case KeyScalar::Kind::Bool:
      return s.boolean ? "true" : "false";
    case KeyScalar::Kind::Number:
      return fmt::format("{}", s.number);
    case KeyScalar::Kind::String: {
      std::string out = "\"";
      for (char c : s.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
  }
  return {};
}

void format_table(std::ostringstream& out, const KeyTable& table) {
  for (const auto& [key, value] : table.values()) {
    out << key << " = ";
    if (value.is_array) {
      out << '[';
      for (size_t i = 0; i < value.items.size(); ++i) {
        if (i) out << ", ";
        out << format_scalar(value.items[i]);
      }
      out << ']';
    } else {
      out << format_scalar(value.scalar);
    }
    out << '\n';
  }
}

}  // namespace

void KeyTable::set(const std::string& key, KeyValue value) {
  values_[key] = std::move(value);
}

void KeyTable::set_number(const std::string& key, double value) {
  KeyValue v;
  v.scalar.kind = KeyScalar::Kind::Number;
  v.scalar.number = value;
  v.scalar.text = fmt::format("{}", value);
  set(key, std::move(v));
}

void KeyTable::set_string(const std::string& key, std::string value) {
  KeyValue v;
  v.scalar.kind = KeyScalar::Kind::String;
  v.scalar.text = std::move(value);
  set(key, std::move(v));
}

void KeyTable::set_bool(const std::string& key, bool value) {
  KeyValue v;
  v.scalar.kind = KeyScalar::Kind::Bool;
  v.scalar.boolean = value;
  set(key, std::move(v));
}

void KeyTable::set_numbers(const std::string& key,
                           const std::vector<double>& values) {
  KeyValue v;
  v.is_array = true;
  for (double x : values) {
    KeyScalar s;
    s.number = x;
    s.text = fmt::format("{}", x);
    v.items.push_back(s);
  }
  set(key, std::move(v));
}

void KeyTable::set_strings(const std::string& key,
                           const std::vector<std::string>& values) {
  KeyValue v;
  v.is_array = true;
  for (const auto& x : values) {
    KeyScalar s;
    s.kind = KeyScalar::Kind::String;
    s.text = x;
    v.items.push_back(s);
  }
  set(key, std::move(v));
}

const KeyValue& KeyTable::lookup(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw SchemaError(fmt::format("{}: missing required key", qualified(path_, key)));
  return it->second;
}

namespace {

const KeyScalar& scalar_of(const KeyValue& v, const std::string& where,
                           KeyScalar::Kind kind) {
  if (v.is_array || v.scalar.kind != kind)
    throw SchemaError(fmt::format("{}: expected {} (line {})", where,
                                  kind_name(kind), v.line));
  return v.scalar;
}

}  // namespace

double KeyTable::number(const std::string& key) const {
  return scalar_of(lookup(key), qualified(path_, key), KeyScalar::Kind::Number)
      .number;
}

double KeyTable::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> KeyTable::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

long long KeyTable::integer(const std::string& key) const {
  double v = number(key);
  auto as_int = static_cast<long long>(v);
  if (static_cast<double>(as_int) != v)
    throw SchemaError(fmt::format("{}: expected an integer, got {}",
                                  qualified(path_, key), v));
  return as_int;
}

long long KeyTable::integer_or(const std::string& key,
                               long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string KeyTable::string(const std::string& key) const {
  return scalar_of(lookup(key), qualified(path_, key), KeyScalar::Kind::String)
      .text;
}

std::string KeyTable::string_or(const std::string& key,
                                std::string fallback) const {
  return has(key) ? string(key) : fallback;
}

bool KeyTable::boolean(const std::string& key) const {
  return scalar_of(lookup(key), qualified(path_, key), KeyScalar::Kind::Bool)
      .boolean;
}

bool KeyTable::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? boolean(key) : fallback;
}

std::vector<double> KeyTable::numbers(const std::string& key) const {
  const KeyValue& v = lookup(key);
  std::vector<double> out;
  if (!v.is_array) {
    out.push_back(scalar_of(v, qualified(path_, key), KeyScalar::Kind::Number).number);
    return out;
  }
  for (const auto& item : v.items) {
    if (item.kind != KeyScalar::Kind::Number)
      throw SchemaError(fmt::format("{}: expected an array of numbers",
                                    qualified(path_, key)));
    out.push_back(item.number);
  }
  return out;
}

std::vector<std::string> KeyTable::strings(const std::string& key) const {
  const KeyValue& v = lookup(key);
  std::vector<std::string> out;
  if (!v.is_array) {
    out.push_back(scalar_of(v, qualified(path_, key), KeyScalar::Kind::String).text);
    return out;
  }
  for (const auto& item : v.items) {
    if (item.kind != KeyScalar::Kind::String)
      throw SchemaError(fmt::format("{}: expected an array of strings",
                                    qualified(path_, key)));
    out.push_back(item.text);
  }
  return out;
}

void KeyTable::require_known_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw SchemaError(fmt::format("{}: unknown key (line {})",
                                    qualified(path_, key), value.line));
  }
}

const KeyTable* KeyTree::table(const std::string& name) const {
  auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

KeyTable& KeyTree::table_mut(const std::string& name) {
  auto it = tables.find(name);
  if (it == tables.end()) it = tables.emplace(name, KeyTable(name, 0)).first;
  return it->second;
}

const std::vector<KeyTable>& KeyTree::array(const std::string& name) const {
  static const std::vector<KeyTable> empty;
  auto it = arrays.find(name);
  return it == arrays.end() ? empty : it->second;
}

KeyTree parse_keytree(std::string_view text) {
  KeyTree tree;
  KeyTable* current = &tree.root;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    LineParser p(line, line_no);
    if (p.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.consume('[')) {
      bool array_of_tables = p.consume('[');
      std::string name = p.table_name();
      p.expect(']');
      if (array_of_tables) p.expect(']');
      if (!p.at_end_or_comment()) p.fail("trailing characters after table header");
      if (array_of_tables) {
        auto& list = tree.arrays[name];
        list.emplace_back(fmt::format("{}[{}]", name, list.size()), line_no);
        current = &list.back();
      } else {
        if (tree.tables.count(name))
          p.fail(fmt::format("duplicate table [{}]", name));
        current = &tree.tables.emplace(name, KeyTable(name, line_no)).first->second;
      }
    } else {
      std::string key = p.bare_key();
      p.expect('=');
      KeyValue value = p.value();
      if (!p.at_end_or_comment()) p.fail("trailing characters after value");
      if (current->has(key)) p.fail(fmt::format("duplicate key '{}'", key));
      current->set(key, std::move(value));
    }
    if (end == text.size()) break;
  }
  return tree;
}

KeyTree load_keytree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_keytree(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), 0);
  }
}

std::string format_keytree(const KeyTree& tree) {
  std::ostringstream out;
  format_table(out, tree.root);
  for (const auto& [name, table] : tree.tables) {
    out << "\n[" << name << "]\n";
    format_table(out, table);
  }
  for (const auto& [name, list] : tree.arrays) {
    for (const auto& table : list) {
      out << "\n[[" << name << "]]\n";
      format_table(out, table);
    }
  }
  return out.str();
}

}  // namespace repday
