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
#include <filesystem>
#include <string>

#include "repday/error.hpp"
#include "repday/keytree.hpp"
#include "repday/system.hpp"

using namespace repday;

namespace {

const std::filesystem::path kData = REPDAY_DATA_DIR;

const char* kTwoBus = R"(
name = "two"
[budgets]
mode = "total"
total = 1000
[[buses]]
id = "a"
reference = true
[[buses]]
id = "b"
[[generators]]
id = "g"
bus = "a"
capacity = 100
cost = 10
[[lines]]
id = "l"
from = "a"
to = "b"
reactance = 0.1
capacity = 50
[[demands]]
id = "d"
bus = "b"
zone = "z"
peak = 40
shed_cost = 1000
)";

bool has_diagnostic(const std::vector<Diagnostic>& list, const std::string& path,
                    const std::string& fragment) {
  return std::any_of(list.begin(), list.end(), [&](const Diagnostic& d) {
    return d.path == path && d.message.find(fragment) != std::string::npos;
  });
}

size_t count_candidates(const auto& items) {
  return std::count_if(items.begin(), items.end(), [](const auto& x) { return x.candidate; });
}

}  // namespace

TEST_CASE("key-tree parsing and canonical form") {
  auto tree = parse_keytree(R"(
# comment
top = 1.5
[sec]
flag = true
name = "x y"
list = [1, 2, "z"]
[[items]]
id = 1
[[items]]
id = 2
)");
  CHECK(tree.root.number("top") == 1.5);
  CHECK(tree.table("sec")->boolean("flag"));
  CHECK(tree.table("sec")->string("name") == "x y");
  CHECK(tree.array("items").size() == 2);
  CHECK(tree.array("items")[1].integer("id") == 2);
  CHECK(format_keytree(parse_keytree(format_keytree(tree))) == format_keytree(tree));

  CHECK_THROWS_AS(parse_keytree("a = 1\na = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_keytree("[s]\n[s]\n"), ParseError);
  CHECK_THROWS_AS(parse_keytree("a = \n"), ParseError);
  CHECK_THROWS_AS(tree.root.string("top"), SchemaError);
  CHECK_THROWS_AS(tree.root.number("missing"), SchemaError);
}

TEST_CASE("storage investment cost rule") {
  CHECK(storage_investment_cost(250, 125) == 140000000.0);
  CHECK(storage_investment_cost(0, 0) == 0.0);
  CHECK(storage_investment_cost(400, 200) == 224000000.0);
  CHECK(0.1 * storage_investment_cost(200, 100) == doctest::Approx(11200000.0).epsilon(1e-15));
  for (double a : {0.0, 0.5, 2.0, 7.25})
    CHECK(storage_investment_cost(a * 300, a * 150) ==
          doctest::Approx(a * storage_investment_cost(300, 150)).epsilon(1e-15));
}

TEST_CASE("RTS file loads with the published entity counts") {
  auto s = load_system(kData / "rts24.toml");
  CHECK(s.buses.size() == 24);
  CHECK(s.generators.size() == 18);
  CHECK(count_candidates(s.generators) == 7);
  CHECK(s.demands.size() == 17);
  CHECK(s.lines.size() == 44);
  CHECK(count_candidates(s.lines) == 6);
  CHECK(s.storages.size() == 7);
  CHECK(count_candidates(s.storages) == 5);
  CHECK(s.wind_units.size() == 6);
  CHECK(count_candidates(s.wind_units) == 4);
  CHECK(validate(s).empty());
  CHECK(s.reference_bus() == 0);
  CHECK(s.big_m == 500000.0);
  CHECK(s.base_power == 100.0);
  CHECK(s.budgets.mode == BudgetMode::Total);
  CHECK(*s.budgets.total == 2e9);

  // Annualized candidate storage costs as tabulated.
  const double expected[] = {14000000, 14000000, 11200000, 16800000, 22400000};
  auto cand = s.candidate_storages();
  REQUIRE(cand.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    const auto& st = s.storages[cand[i]];
    CHECK(st.annualized_cost == doctest::Approx(expected[i]).epsilon(1e-15));
    CHECK(st.charge_efficiency == 0.9);
    CHECK(st.initial_energy == 0.0);
  }
  CHECK(s.storages[cand[1]].max_units == 3);
  CHECK(s.lines[41].annualized_cost == 228940.0);
  CHECK(s.lines[41].investment_cost == doctest::Approx(2289400.0));
  CHECK(s.generators_at(s.bus_index("n16")).size() == 2);
  CHECK(s.demands_at(s.bus_index("n11")).empty());
  CHECK(s.wind_at(s.bus_index("n20")).size() == 1);
}

TEST_CASE("minimal two-bus system is valid and round trips") {
  auto s = system_from_keytree(parse_keytree(kTwoBus));
  CHECK(validate(s).empty());
  CHECK(s.delta_tau == 1.0);
  CHECK(s.big_m == kDefaultBigM);
  auto again = system_from_keytree(system_to_keytree(s));
  CHECK(format_keytree(system_to_keytree(again)) == format_keytree(system_to_keytree(s)));
  CHECK(std::isinf(safe_big_m(s)) == false);
}

TEST_CASE("validation diagnostics") {
  auto base = system_from_keytree(parse_keytree(kTwoBus));

  auto two_refs = base;
  two_refs.buses[1].is_reference = true;
  CHECK(!validate(two_refs).empty());

  auto loop = base;
  loop.lines[0].to = "a";
  CHECK(has_diagnostic(validate(loop), "lines[0]", "coincide"));

  auto reactance = base;
  reactance.lines[0].reactance = 0.0;
  CHECK(has_diagnostic(validate(reactance), "lines[0].reactance", "positive"));

  auto dangling = base;
  dangling.generators[0].bus = "zz";
  CHECK(!validate(dangling).empty());

  auto duplicate = base;
  duplicate.generators.push_back(duplicate.generators[0]);
  CHECK(!validate(duplicate).empty());

  auto storage = base;
  Storage st;
  st.id = "s";
  st.bus = "a";
  st.energy_capacity = 10;
  st.power_capacity = 5;
  st.discharge_efficiency = 0.0;
  storage.storages.push_back(st);
  CHECK(has_diagnostic(validate(storage), "storages[0].discharge_efficiency", "efficiency out of range"));

  std::string text = kTwoBus;
  text.replace(text.find("reactance = 0.1"), 15, "reactance = -1");
  try {
    system_from_keytree(parse_keytree(text));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("lines[0].reactance") != std::string::npos);
  }

  std::string unknown = std::string(kTwoBus) + "\n[extras]\nx = 1\n";
  CHECK_THROWS_AS(system_from_keytree(parse_keytree(unknown)), SchemaError);
}

TEST_CASE("desk system invariants") {
  auto s = load_system(kData / "desk3.toml");
  CHECK(validate(s).empty());
  CHECK(s.candidate_lines().size() == 2);
  CHECK(s.candidate_storages().size() == 1);
  CHECK(s.storages[s.candidate_storages()[0]].max_units == 2);
  CHECK(s.candidate_generators().size() == 1);
  // Every candidate line stays within the admissible big-M range.
  CHECK(s.big_m >= safe_big_m(s));
}
