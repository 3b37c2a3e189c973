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

#include "repday/lp_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "file_util.hpp"
#include "repday/error.hpp"

namespace repday {

namespace {

constexpr std::size_t kMaxNameLength = 255;
constexpr int kTermsPerLine = 6;
constexpr const char* kObjectiveName = "obj";

const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> words = {
      "free",    "inf",      "infinity", "end",      "bound",   "bounds", "st",
      "s.t.",    "subject",  "such",     "that",     "min",     "max",    "minimize",
      "maximize", "minimum", "maximum",  "general",  "generals", "gen",   "integer",
      "integers", "binary",  "binaries", "bin",      "semi",    "semis",  "sos",
      "name",    "rows",     "columns",  "rhs",      "ranges",  "endata", "marker"};
  return words;
}

std::string lower_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string number(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

std::optional<double> parse_number(std::string_view token) {
  const std::string lower = lower_case(token);
  std::string_view body = lower;
  bool negative = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    negative = body[0] == '-';
    body.remove_prefix(1);
  }
  if (body == "inf" || body == "infinity") return negative ? -kInfinity : kInfinity;
  double v = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || body.empty()) return std::nullopt;
  return negative ? -v : v;
}

void assign_unique(std::vector<std::string>& names, const std::vector<std::string>& originals,
                   std::unordered_set<std::string>& used, NameMap& map) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string candidate = names[i];
    if (used.count(candidate)) {
      for (int k = 1;; ++k) {
        std::string suffix = "_" + std::to_string(k);
        std::string base = candidate.substr(0, kMaxNameLength - suffix.size());
        if (!used.count(base + suffix)) {
          candidate = base + suffix;
          break;
        }
      }
      map.collisions.emplace_back(originals[i], candidate);
    }
    if (candidate != originals[i]) ++map.renamed;
    used.insert(candidate);
    names[i] = std::move(candidate);
  }
}

struct Writer {
  std::string out;
  void line(std::string_view s) {
    out.append(s);
    out.push_back('\n');
  }
};

// Appends " + c name" style terms, wrapping after a fixed count.
void append_terms(std::string& out, const std::vector<std::pair<double, std::string>>& terms,
                  std::string_view indent) {
  int on_line = 0;
  bool first = true;
  for (const auto& [coef, name] : terms) {
    if (on_line == kTermsPerLine) {
      out.push_back('\n');
      out.append(indent);
      on_line = 0;
    }
    if (coef < 0.0 || (coef == 0.0 && std::signbit(coef))) {
      out.append(first ? "-" : " -");
    } else {
      out.append(first ? "+" : " +");
    }
    out.push_back(' ');
    out.append(number(std::abs(coef)));
    out.push_back(' ');
    out.append(name);
    first = false;
    ++on_line;
  }
}

}  // namespace

FileFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower_case(path.extension().string());
  if (ext == ".lp") return FileFormat::LpText;
  if (ext == ".mps") return FileFormat::Mps;
  throw ParameterError("cannot infer file format from '" + path.string() +
                       "' (expected .lp or .mps)");
}

std::string sanitize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size() + 1);
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.' ||
      reserved_words().count(lower_case(out)))
    out.insert(out.begin(), '_');
  if (out.size() > kMaxNameLength) out.resize(kMaxNameLength);
  return out;
}

NameMap sanitized_names(const MilpProblem& problem) {
  NameMap map;
  std::vector<std::string> var_orig, row_orig;
  for (const Variable& v : problem.variables()) {
    var_orig.push_back(v.name);
    map.variables.push_back(sanitize_name(v.name));
  }
  for (const Row& r : problem.rows()) {
    row_orig.push_back(r.name);
    map.rows.push_back(sanitize_name(r.name));
  }
  std::unordered_set<std::string> used_vars;
  std::unordered_set<std::string> used_rows{kObjectiveName};
  assign_unique(map.variables, var_orig, used_vars, map);
  assign_unique(map.rows, row_orig, used_rows, map);
  return map;
}

// LP text ------------------------------------------------------------------

std::string format_lp(const MilpProblem& problem) {
  const NameMap names = sanitized_names(problem);
  Writer w;
  w.line("\\ Problem: " + (problem.name.empty() ? std::string("unnamed") : problem.name));
  w.line("Minimize");
  {
    // Every variable is listed in the objective so that column order and
    // isolated columns survive a round trip.
    std::vector<std::pair<double, std::string>> terms;
    for (std::size_t j = 0; j < problem.num_variables(); ++j)
      terms.emplace_back(problem.variable(static_cast<int>(j)).objective, names.variables[j]);
    std::string text = " obj: ";
    append_terms(text, terms, "  ");
    w.line(text);
  }
  w.line("Subject To");
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    const Row& r = problem.row(static_cast<int>(i));
    std::vector<std::pair<double, std::string>> terms;
    for (const Term& t : r.terms) terms.emplace_back(t.coef, names.variables[t.var]);
    if (terms.empty() && problem.num_variables() > 0) terms.emplace_back(0.0, names.variables[0]);
    std::string text = " " + names.rows[i] + ": ";
    append_terms(text, terms, "  ");
    const char* sense = r.sense == RowSense::LessEqual ? " <= "
                        : r.sense == RowSense::GreaterEqual ? " >= "
                                                            : " = ";
    text += sense + number(r.rhs);
    w.line(text);
  }
  w.line("Bounds");
  std::vector<std::string> general, binary;
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(static_cast<int>(j));
    const std::string& n = names.variables[j];
    if (v.type == VarType::Binary) binary.push_back(n);
    if (v.type == VarType::Integer) general.push_back(n);
    const bool binary_default = v.type == VarType::Binary && v.lower == 0.0 && v.upper == 1.0;
    if (binary_default || (v.type != VarType::Binary && v.lower == 0.0 && v.upper == kInfinity))
      continue;
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      w.line(" " + n + " free");
    } else if (v.lower == v.upper) {
      w.line(" " + n + " = " + number(v.lower));
    } else if (v.upper == kInfinity) {
      w.line(" " + n + " >= " + number(v.lower));
    } else {
      w.line(" " + number(v.lower) + " <= " + n + " <= " + number(v.upper));
    }
  }
  if (!general.empty()) {
    w.line("General");
    for (const auto& n : general) w.line(" " + n);
  }
  if (!binary.empty()) {
    w.line("Binary");
    for (const auto& n : binary) w.line(" " + n);
  }
  w.line("End");
  return w.out;
}

namespace {

enum class LpSection { None, Objective, Constraints, Bounds, General, Binary, End };

std::optional<LpSection> section_keyword(std::string_view line) {
  const std::string l = lower_case(line);
  if (l == "minimize" || l == "minimum" || l == "min") return LpSection::Objective;
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return LpSection::Constraints;
  if (l == "bounds" || l == "bound") return LpSection::Bounds;
  if (l == "general" || l == "generals" || l == "gen" || l == "integer" || l == "integers")
    return LpSection::General;
  if (l == "binary" || l == "binaries" || l == "bin") return LpSection::Binary;
  if (l == "end") return LpSection::End;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Token {
  std::string text;
  int line = 0;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
         c == ']' || c == '#' || c == '$' || c == '@' || c == '!' || c == '"' || c == '\'' ||
         c == '{' || c == '}' || c == '~' || c == '?' || c == '&' || c == '/' || c == ',' ||
         c == ';';
}

void tokenize(std::string_view line, int line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
        op.push_back(line[i + 1]);
        ++i;
      }
      ++i;
      out.push_back({op, line_no});
      continue;
    }
    if (c == '+' || c == '-' || c == ':') {
      out.push_back({std::string(1, c), line_no});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < line.size() &&
                                                         std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      std::size_t j = i;
      while (j < line.size()) {
        const char d = line[j];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
          ++j;
        } else if ((d == 'e' || d == 'E') && j + 1 < line.size() &&
                   (std::isdigit(static_cast<unsigned char>(line[j + 1])) ||
                    ((line[j + 1] == '+' || line[j + 1] == '-') && j + 2 < line.size() &&
                     std::isdigit(static_cast<unsigned char>(line[j + 2]))))) {
          j += 2;
        } else {
          break;
        }
      }
      out.push_back({std::string(line.substr(i, j - i)), line_no});
      i = j;
      continue;
    }
    if (is_name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && is_name_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), line_no});
      i = j;
      continue;
    }
    throw ParseError(fmt::format("unexpected character '{}'", c), line_no);
  }
}

bool is_sense(const std::string& t) {
  return t == "<=" || t == "=<" || t == "<" || t == ">=" || t == "=>" || t == ">" || t == "=";
}

RowSense to_sense(const std::string& t) {
  if (t == "<=" || t == "=<" || t == "<") return RowSense::LessEqual;
  if (t == ">=" || t == "=>" || t == ">") return RowSense::GreaterEqual;
  return RowSense::Equal;
}

bool is_number_token(const std::string& t) {
  return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.');
}

struct PendingVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool explicit_bounds = false;
  VarType type = VarType::Continuous;
  double objective = 0.0;
};

class LpParser {
 public:
  MilpProblem parse(std::string_view text) {
    LpSection section = LpSection::None;
    std::vector<Token> objective_tokens, constraint_tokens;
    std::string problem_name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      if (auto bs = raw.find('\\'); bs != std::string_view::npos) {
        std::string_view comment = trim(raw.substr(bs + 1));
        if (line_no == 1 && comment.substr(0, 8) == "Problem:")
          problem_name = std::string(trim(comment.substr(8)));
        raw = raw.substr(0, bs);
      }
      const std::string_view line = trim(raw);
      if (line.empty()) {
        if (end == text.size()) break;
        continue;
      }
      if (auto kw = section_keyword(line)) {
        flush(section, objective_tokens, constraint_tokens);
        section = *kw;
        if (section == LpSection::End) break;
        continue;
      }
      if (lower_case(line) == "maximize" || lower_case(line) == "max" ||
          lower_case(line) == "maximum")
        throw ParseError("maximization is not supported", line_no);
      switch (section) {
        case LpSection::None:
          throw ParseError("content before the objective section", line_no);
        case LpSection::Objective:
          tokenize(line, line_no, objective_tokens);
          break;
        case LpSection::Constraints:
          tokenize(line, line_no, constraint_tokens);
          break;
        case LpSection::Bounds:
          parse_bound(line, line_no);
          break;
        case LpSection::General:
        case LpSection::Binary: {
          std::vector<Token> toks;
          tokenize(line, line_no, toks);
          for (const Token& t : toks) {
            PendingVariable& v = variable(t.text);
            v.type = section == LpSection::General ? VarType::Integer : VarType::Binary;
          }
          break;
        }
        case LpSection::End:
          break;
      }
      if (end == text.size()) break;
    }
    if (section != LpSection::End) throw ParseError("missing End", line_no);

    MilpProblem p;
    p.name = problem_name;
    for (PendingVariable& v : variables_) {
      double lo = v.lower, up = v.upper;
      if (v.type == VarType::Binary && !v.explicit_bounds) {
        lo = 0.0;
        up = 1.0;
      }
      p.add_variable(v.name, lo, up, v.type, v.objective);
    }
    for (auto& r : rows_) p.add_row(std::move(r.name), std::move(r.terms), r.sense, r.rhs);
    p.check();
    return p;
  }

 private:
  // Columns are numbered by first appearance, so expressions are parsed as
  // soon as their section closes.
  void flush(LpSection section, std::vector<Token>& objective, std::vector<Token>& constraints) {
    if (section == LpSection::Objective) {
      parse_objective(objective);
      objective.clear();
    } else if (section == LpSection::Constraints) {
      parse_constraints(constraints);
      constraints.clear();
    }
  }

  PendingVariable& variable(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return variables_[it->second];
    index_.emplace(name, static_cast<int>(variables_.size()));
    variables_.push_back(PendingVariable{name});
    return variables_.back();
  }
  int variable_id(const std::string& name) {
    variable(name);
    return index_.at(name);
  }

  // Parses "[sign] [coef] name" repeated, starting at i, stopping at a sense
  // token or the end. Returns merged terms in order of first appearance.
  std::vector<std::pair<int, double>> parse_expression(const std::vector<Token>& t, std::size_t& i) {
    std::vector<std::pair<int, double>> terms;
    while (i < t.size() && !is_sense(t[i].text)) {
      double sign = 1.0;
      while (i < t.size() && (t[i].text == "+" || t[i].text == "-")) {
        if (t[i].text == "-") sign = -sign;
        ++i;
      }
      if (i >= t.size()) throw ParseError("dangling sign", t.back().line);
      double coef = 1.0;
      if (is_number_token(t[i].text)) {
        auto v = parse_number(t[i].text);
        if (!v) throw ParseError("bad number '" + t[i].text + "'", t[i].line);
        coef = *v;
        ++i;
        if (i >= t.size() || is_sense(t[i].text))
          throw ParseError("constant terms are not supported", t[i - 1].line);
      }
      const Token& name = t[i];
      if (name.text == ":" || name.text == "+" || name.text == "-" || is_number_token(name.text))
        throw ParseError("expected a variable name, got '" + name.text + "'", name.line);
      // A "name :" pair starts the next constraint.
      if (i + 1 < t.size() && t[i + 1].text == ":") break;
      terms.emplace_back(variable_id(name.text), sign * coef);
      ++i;
    }
    return terms;
  }

  void parse_objective(const std::vector<Token>& t) {
    std::size_t i = 0;
    if (t.size() >= 2 && t[1].text == ":") i = 2;
    auto terms = parse_expression(t, i);
    if (i != t.size()) throw ParseError("unexpected token in objective", t[i].line);
    for (const auto& [var, coef] : terms) variables_[var].objective += coef;
  }

  void parse_constraints(const std::vector<Token>& t) {
    std::size_t i = 0;
    int counter = 0;
    while (i < t.size()) {
      std::string name;
      if (i + 1 < t.size() && t[i + 1].text == ":") {
        name = t[i].text;
        i += 2;
      } else {
        name = "R" + std::to_string(++counter);
      }
      const int line = t[std::min(i, t.size() - 1)].line;
      auto terms = parse_expression(t, i);
      if (i >= t.size() || !is_sense(t[i].text))
        throw ParseError("constraint '" + name + "' has no sense", line);
      const RowSense sense = to_sense(t[i].text);
      ++i;
      double sign = 1.0;
      while (i < t.size() && (t[i].text == "+" || t[i].text == "-")) {
        if (t[i].text == "-") sign = -sign;
        ++i;
      }
      if (i >= t.size()) throw ParseError("constraint '" + name + "' has no right-hand side", line);
      auto rhs = parse_number(t[i].text);
      if (!rhs) throw ParseError("bad right-hand side '" + t[i].text + "'", t[i].line);
      ++i;
      PendingRow row{name, {}, sense, sign * *rhs};
      // Merge duplicates and drop explicit zeros.
      std::map<int, double> merged;
      std::vector<int> order;
      for (const auto& [var, coef] : terms) {
        if (!merged.count(var)) order.push_back(var);
        merged[var] += coef;
      }
      for (int var : order)
        if (merged[var] != 0.0) row.terms.push_back({var, merged[var]});
      rows_.push_back(std::move(row));
    }
  }

  void parse_bound(std::string_view line, int line_no) {
    std::vector<Token> t;
    tokenize(line, line_no, t);
    // Fold unary signs into the following number.
    std::vector<std::string> s;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if ((t[i].text == "+" || t[i].text == "-") && i + 1 < t.size() &&
          (is_number_token(t[i + 1].text) || lower_case(t[i + 1].text) == "inf" ||
           lower_case(t[i + 1].text) == "infinity")) {
        s.push_back(t[i].text + t[i + 1].text);
        ++i;
      } else {
        s.push_back(t[i].text);
      }
    }
    auto num = [&](const std::string& tok) {
      auto v = parse_number(tok);
      if (!v) throw ParseError("bad bound value '" + tok + "'", line_no);
      return *v;
    };
    auto is_value = [&](const std::string& tok) { return parse_number(tok).has_value(); };
    if (s.size() == 2 && lower_case(s[1]) == "free") {
      PendingVariable& v = variable(s[0]);
      v.lower = -kInfinity;
      v.upper = kInfinity;
      v.explicit_bounds = true;
      return;
    }
    if (s.size() == 3 && is_sense(s[1])) {
      const bool value_first = is_value(s[0]) && !is_value(s[2]);
      const std::string& name = value_first ? s[2] : s[0];
      const double value = num(value_first ? s[0] : s[2]);
      RowSense sense = to_sense(s[1]);
      if (value_first && sense != RowSense::Equal)
        sense = sense == RowSense::LessEqual ? RowSense::GreaterEqual : RowSense::LessEqual;
      PendingVariable& v = variable(name);
      v.explicit_bounds = true;
      if (sense == RowSense::Equal) {
        v.lower = v.upper = value;
      } else if (sense == RowSense::LessEqual) {
        v.upper = value;
        // Common convention: a negative upper bound alone implies a free
        // lower side. Not produced by our writer.
        if (value < 0.0 && v.lower == 0.0) v.lower = -kInfinity;
      } else {
        v.lower = value;
      }
      return;
    }
    if (s.size() == 5 && is_sense(s[1]) && is_sense(s[3])) {
      if (to_sense(s[1]) != RowSense::LessEqual || to_sense(s[3]) != RowSense::LessEqual)
        throw ParseError("double bound must read 'l <= x <= u'", line_no);
      PendingVariable& v = variable(s[2]);
      v.lower = num(s[0]);
      v.upper = num(s[4]);
      v.explicit_bounds = true;
      return;
    }
    throw ParseError("unrecognized bound '" + std::string(line) + "'", line_no);
  }

  struct PendingRow {
    std::string name;
    std::vector<Term> terms;
    RowSense sense;
    double rhs;
  };

  std::vector<PendingVariable> variables_;
  std::unordered_map<std::string, int> index_;
  std::vector<PendingRow> rows_;
};

}  // namespace

MilpProblem parse_lp(std::string_view text) { return LpParser().parse(text); }

// MPS ----------------------------------------------------------------------

std::string format_mps(const MilpProblem& problem) {
  const NameMap names = sanitized_names(problem);
  Writer w;
  w.line("NAME " + (problem.name.empty() ? std::string("unnamed") : sanitize_name(problem.name)));
  w.line("ROWS");
  w.line(std::string(" N ") + kObjectiveName);
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    const RowSense s = problem.row(static_cast<int>(i)).sense;
    const char* code = s == RowSense::LessEqual ? "L" : s == RowSense::GreaterEqual ? "G" : "E";
    w.line(fmt::format(" {} {}", code, names.rows[i]));
  }
  std::vector<std::vector<std::pair<int, double>>> columns(problem.num_variables());
  for (std::size_t i = 0; i < problem.num_rows(); ++i)
    for (const Term& t : problem.row(static_cast<int>(i)).terms)
      columns[t.var].emplace_back(static_cast<int>(i), t.coef);
  w.line("COLUMNS");
  bool in_integer_block = false;
  int marker = 0;
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(static_cast<int>(j));
    if (v.is_integral() != in_integer_block) {
      w.line(fmt::format(" MARKER{} 'MARKER' '{}'", marker++, v.is_integral() ? "INTORG" : "INTEND"));
      in_integer_block = v.is_integral();
    }
    const std::string& n = names.variables[j];
    if (v.objective != 0.0 || columns[j].empty())
      w.line(fmt::format(" {} {} {}", n, kObjectiveName, number(v.objective)));
    for (const auto& [row, coef] : columns[j])
      w.line(fmt::format(" {} {} {}", n, names.rows[row], number(coef)));
  }
  if (in_integer_block) w.line(fmt::format(" MARKER{} 'MARKER' 'INTEND'", marker++));
  w.line("RHS");
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    const double rhs = problem.row(static_cast<int>(i)).rhs;
    if (rhs != 0.0) w.line(fmt::format(" RHS {} {}", names.rows[i], number(rhs)));
  }
  w.line("BOUNDS");
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(static_cast<int>(j));
    const std::string& n = names.variables[j];
    if (v.type == VarType::Binary && v.lower == 0.0 && v.upper == 1.0) {
      w.line(" BV BND " + n);
      continue;
    }
    if (v.lower == v.upper) {
      w.line(fmt::format(" FX BND {} {}", n, number(v.lower)));
      continue;
    }
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      w.line(" FR BND " + n);
      continue;
    }
    if (v.lower == -kInfinity) w.line(" MI BND " + n);
    else if (v.lower != 0.0) w.line(fmt::format(" LO BND {} {}", n, number(v.lower)));
    if (v.upper != kInfinity) w.line(fmt::format(" UP BND {} {}", n, number(v.upper)));
    else if (v.is_integral()) w.line(" PL BND " + n);
  }
  w.line("ENDATA");
  return w.out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

MilpProblem parse_mps(std::string_view text) {
  enum class Sec { None, Rows, Columns, Rhs, Ranges, Bounds, End };
  Sec sec = Sec::None;
  std::string name;
  std::string objective_row;
  struct PRow {
    std::string name;
    RowSense sense;
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  std::vector<PRow> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<PendingVariable> vars;
  std::vector<bool> bounded_upper;
  std::unordered_map<std::string, int> var_index;
  bool integer_block = false;
  int line_no = 0;

  auto get_var = [&](std::string_view n, int line) -> int {
    auto it = var_index.find(std::string(n));
    if (it != var_index.end()) return it->second;
    (void)line;
    const int id = static_cast<int>(vars.size());
    var_index.emplace(std::string(n), id);
    vars.push_back(PendingVariable{std::string(n)});
    bounded_upper.push_back(false);
    return id;
  };
  auto value_of = [&](std::string_view tok) {
    auto v = parse_number(tok);
    if (!v) throw ParseError("bad number '" + std::string(tok) + "'", line_no);
    return *v;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line[0] == '*') continue;
    const auto f = split_fields(line);
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string head = lower_case(f[0]);
      if (head == "name") {
        if (f.size() > 1) name = std::string(f[1]);
        continue;
      }
      if (head == "rows") sec = Sec::Rows;
      else if (head == "columns") sec = Sec::Columns;
      else if (head == "rhs") sec = Sec::Rhs;
      else if (head == "ranges") sec = Sec::Ranges;
      else if (head == "bounds") sec = Sec::Bounds;
      else if (head == "endata") {
        sec = Sec::End;
        break;
      } else if (head == "objsense") {
        throw ParseError("OBJSENSE is not supported", line_no);
      } else {
        throw ParseError("unknown section '" + std::string(f[0]) + "'", line_no);
      }
      continue;
    }
    switch (sec) {
      case Sec::None:
      case Sec::End:
        throw ParseError("data outside a section", line_no);
      case Sec::Rows: {
        if (f.size() != 2) throw ParseError("ROWS entry needs a type and a name", line_no);
        const std::string type = lower_case(f[0]);
        if (type == "n") {
          if (!objective_row.empty()) throw ParseError("more than one objective row", line_no);
          objective_row = std::string(f[1]);
          continue;
        }
        RowSense s;
        if (type == "l") s = RowSense::LessEqual;
        else if (type == "g") s = RowSense::GreaterEqual;
        else if (type == "e") s = RowSense::Equal;
        else throw ParseError("unknown row type '" + std::string(f[0]) + "'", line_no);
        if (row_index.count(std::string(f[1])))
          throw ParseError("duplicate row '" + std::string(f[1]) + "'", line_no);
        row_index.emplace(std::string(f[1]), static_cast<int>(rows.size()));
        rows.push_back(PRow{std::string(f[1]), s, 0.0, {}});
        break;
      }
      case Sec::Columns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") integer_block = true;
          else if (f[2] == "'INTEND'") integer_block = false;
          else throw ParseError("unknown marker", line_no);
          continue;
        }
        if (f.size() != 3 && f.size() != 5) throw ParseError("COLUMNS entry malformed", line_no);
        const int var = get_var(f[0], line_no);
        if (integer_block) vars[var].type = VarType::Integer;
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const double v = value_of(f[k + 1]);
          if (f[k] == objective_row) {
            vars[var].objective += v;
            continue;
          }
          auto it = row_index.find(std::string(f[k]));
          if (it == row_index.end())
            throw ParseError("unknown row '" + std::string(f[k]) + "'", line_no);
          if (v != 0.0) rows[it->second].terms.push_back({var, v});
        }
        break;
      }
      case Sec::Rhs: {
        if (f.size() != 3 && f.size() != 5) throw ParseError("RHS entry malformed", line_no);
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          if (f[k] == objective_row) throw ParseError("objective constants are not supported", line_no);
          auto it = row_index.find(std::string(f[k]));
          if (it == row_index.end())
            throw ParseError("unknown row '" + std::string(f[k]) + "'", line_no);
          rows[it->second].rhs = value_of(f[k + 1]);
        }
        break;
      }
      case Sec::Ranges:
        throw ParseError("RANGES are not supported", line_no);
      case Sec::Bounds: {
        if (f.size() < 3) throw ParseError("BOUNDS entry malformed", line_no);
        const std::string type = lower_case(f[0]);
        auto it = var_index.find(std::string(f[2]));
        if (it == var_index.end())
          throw ParseError("unknown column '" + std::string(f[2]) + "'", line_no);
        PendingVariable& v = vars[it->second];
        v.explicit_bounds = true;
        const bool needs_value = type == "up" || type == "lo" || type == "fx" || type == "li" ||
                                 type == "ui";
        if (needs_value && f.size() < 4) throw ParseError("bound needs a value", line_no);
        if (type == "up" || type == "ui") {
          v.upper = value_of(f[3]);
          bounded_upper[it->second] = true;
          if (type == "ui") v.type = VarType::Integer;
        } else if (type == "lo" || type == "li") {
          v.lower = value_of(f[3]);
          if (type == "li") v.type = VarType::Integer;
        } else if (type == "fx") {
          v.lower = v.upper = value_of(f[3]);
        } else if (type == "fr") {
          v.lower = -kInfinity;
          v.upper = kInfinity;
        } else if (type == "mi") {
          v.lower = -kInfinity;
        } else if (type == "pl") {
          v.upper = kInfinity;
        } else if (type == "bv") {
          v.type = VarType::Binary;
          v.lower = 0.0;
          v.upper = 1.0;
        } else {
          throw ParseError("unknown bound type '" + std::string(f[0]) + "'", line_no);
        }
        break;
      }
    }
  }
  if (sec != Sec::End) throw ParseError("missing ENDATA", line_no);
  MilpProblem p;
  p.name = name;
  for (const PendingVariable& v : vars) p.add_variable(v.name, v.lower, v.upper, v.type, v.objective);
  for (PRow& r : rows) p.add_row(std::move(r.name), std::move(r.terms), r.sense, r.rhs);
  p.check();
  return p;
}

// Files --------------------------------------------------------------------

NameMap export_problem(const MilpProblem& problem, const std::filesystem::path& path,
                       FileFormat format) {
  problem.check();
  detail::write_text_file(path, format == FileFormat::LpText ? format_lp(problem)
                                                             : format_mps(problem));
  return sanitized_names(problem);
}

NameMap export_problem(const MilpProblem& problem, const std::filesystem::path& path) {
  return export_problem(problem, path, format_from_path(path));
}

MilpProblem import_problem(const std::filesystem::path& path) {
  const FileFormat format = format_from_path(path);
  const std::string text = detail::read_text_file(path);
  return format == FileFormat::LpText ? parse_lp(text) : parse_mps(text);
}

std::string format_solution(const MilpProblem& problem, std::span<const double> values) {
  if (values.size() != problem.num_variables())
    throw ParameterError("solution size does not match the problem");
  const NameMap names = sanitized_names(problem);
  std::string out;
  for (std::size_t j = 0; j < values.size(); ++j)
    out += names.variables[j] + " " + number(values[j]) + "\n";
  return out;
}

void write_solution(const MilpProblem& problem, std::span<const double> values,
                    const std::filesystem::path& path) {
  detail::write_text_file(path, format_solution(problem, values));
}

MilpSolution parse_solution(const MilpProblem& problem, std::string_view text) {
  const NameMap names = sanitized_names(problem);
  std::unordered_map<std::string, int> index;
  for (std::size_t j = 0; j < names.variables.size(); ++j)
    index.emplace(names.variables[j], static_cast<int>(j));
  std::vector<double> values(problem.num_variables(), 0.0);
  std::vector<bool> seen(problem.num_variables(), false);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_fields(line);
    if (f.size() != 2) throw ParseError("expected 'name value'", line_no);
    auto it = index.find(std::string(f[0]));
    if (it == index.end()) throw ParseError("unknown variable '" + std::string(f[0]) + "'", line_no);
    if (seen[it->second])
      throw ParseError("variable '" + std::string(f[0]) + "' listed twice", line_no);
    auto v = parse_number(f[1]);
    if (!v || !std::isfinite(*v)) throw ParseError("bad value '" + std::string(f[1]) + "'", line_no);
    values[it->second] = *v;
    seen[it->second] = true;
  }
  for (std::size_t j = 0; j < seen.size(); ++j)
    if (!seen[j]) throw ParseError("missing value for variable '" + names.variables[j] + "'", 0);

  const auto violations = find_violations(problem, values, true);
  if (!violations.empty()) {
    std::string msg = "rejected infeasible point; worst violations:";
    for (std::size_t k = 0; k < std::min<std::size_t>(3, violations.size()); ++k) {
      const Violation& v = violations[k];
      const char* kind = v.kind == Violation::Kind::Row     ? "row"
                         : v.kind == Violation::Kind::Bound ? "bound of"
                                                            : "integrality of";
      msg += fmt::format(" {} '{}' by {:.6g};", kind, v.name, v.amount);
    }
    msg.pop_back();
    throw SolveError(msg);
  }
  MilpSolution out;
  out.status = MilpStatus::Optimal;
  out.has_incumbent = true;
  out.objective = problem.objective_value(values);
  out.best_bound = out.objective;
  out.values = std::move(values);
  return out;
}

MilpSolution import_solution(const MilpProblem& problem, const std::filesystem::path& path) {
  return parse_solution(problem, detail::read_text_file(path));
}

}  // namespace repday
