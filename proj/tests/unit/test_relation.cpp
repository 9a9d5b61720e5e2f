#include <doctest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "helpers.hpp"
#include "scref/relation.hpp"

using namespace scref;
using scref::testing::data_model;
using scref::testing::model;
using scref::testing::read_data;

namespace {

RefinementReport validate(const std::string& orig, const std::string& ref, const std::string& map) {
  auto o = data_model(orig);
  auto r = data_model(ref);
  auto m = parse_mapping(read_data(map), o, r, map);
  return check_refinement(o, r, m);
}

bool failed(const RefinementReport& report, const std::string& check) {
  auto ids = report.checks_with(Verdict::Fail);
  return std::find(ids.begin(), ids.end(), check) != ids.end();
}

}  // namespace

TEST_CASE("robot increments validate") {
  auto initial = data_model("fixtures/robot/initial.sc");
  auto self = check_refinement(initial, initial, {});
  CHECK(self.valid);
  CHECK(self.checks_with(Verdict::Warn) == std::vector<std::string>{"sc/fully-defined"});

  CHECK(validate("fixtures/robot/initial.sc", "golden/increment1.sc", "golden/increment1.map").valid);
  CHECK(validate("golden/increment1.sc", "golden/increment2.sc", "golden/increment2.map").valid);
  CHECK(validate("fixtures/robot/initial.sc", "golden/composed.sc", "golden/composed.map").valid);

  CheckOptions strict;
  strict.require_complete = true;
  auto r = check_refinement(initial, initial, {}, strict);
  CHECK_FALSE(r.valid);
  CHECK(failed(r, "sc/fully-defined"));
}

TEST_CASE("robot mutations are rejected by the matching check") {
  const std::string m = "fixtures/robot/mutations/";
  auto drop_clear = validate("golden/increment1.sc", m + "drop_clear.sc", "golden/increment2.map");
  CHECK_FALSE(drop_clear.valid);
  CHECK(failed(drop_clear, "refinement/event-var-inclusion"));

  auto rename = validate("fixtures/robot/initial.sc", m + "rename_runrobot.sc", "golden/increment1.map");
  CHECK_FALSE(rename.valid);
  CHECK(failed(rename, "R1/original-name"));

  auto broadcast = validate("golden/increment1.sc", m + "drop_broadcast.sc", "golden/increment2.map");
  CHECK_FALSE(broadcast.valid);
  CHECK(failed(broadcast, "R2.3/original-broadcast"));

  auto unmapped = validate("fixtures/robot/initial.sc", m + "unmapped_state.sc", "golden/increment1.map");
  CHECK_FALSE(unmapped.valid);
  CHECK(failed(unmapped, "refinement/inverse-surjection"));

  auto shallow = validate("golden/increment1.sc", m + "shallow_history.sc", "golden/increment2.map");
  CHECK_FALSE(shallow.valid);
  CHECK(failed(shallow, "R7/history"));
}

TEST_CASE("a disjunctive guard breaks guard inclusion") {
  auto o = data_model("golden/increment1.sc");
  auto r = data_model("golden/increment2.sc");
  auto m = parse_mapping(read_data("golden/increment2.map"), o, r);
  r.transitions.at("RunRobot.r7.r4").guard = Guard::disj(Guard::atom("path_ok"), Guard::atom("true"));
  auto report = check_refinement(o, r, m);
  CHECK_FALSE(report.valid);
  CHECK(failed(report, "refinement/guard-inclusion"));
}

TEST_CASE("fail-fast stops after the first failing family") {
  const std::string m = "fixtures/robot/mutations/";
  auto o = data_model("golden/increment1.sc");
  auto r = data_model(m + "drop_clear.sc");
  auto map = parse_mapping(read_data("golden/increment2.map"), o, r);
  CheckOptions ff;
  ff.fail_fast = true;
  auto full = check_refinement(o, r, map);
  auto fast = check_refinement(o, r, map, ff);
  CHECK_FALSE(fast.valid);
  CHECK(fast.checks_with(Verdict::Fail) == std::vector<std::string>{"refinement/event-var-inclusion"});
  CHECK(full.checks_with(Verdict::Fail).size() > 1);
}

TEST_CASE("ill-formed inputs are reported before any other check") {
  auto o = model("state A default;");
  auto r = o;
  r.states.at("A").is_default = false;
  auto report = check_refinement(o, r, {});
  CHECK_FALSE(report.valid);
  CHECK(report.checks_with(Verdict::Fail) == std::vector<std::string>{"model/well-formed"});
}

TEST_CASE("mapping completion") {
  auto o = model("state A default; <<standard, virtual>> or V { state B default; }");
  auto r = model(
      "state A default; <<standard, virtual>> or V { state B default; state N; or W { state X default; } } "
      "trans t: B -> N;");
  auto m = complete_mapping(o, r, {});
  CHECK(m.find("A")->original == "A");
  CHECK(m.find("A")->created_by == std::nullopt);
  CHECK(m.find("N")->original == "V");
  CHECK(m.find("N")->created_by == std::optional<std::string>("virtual"));
  CHECK(m.find("X")->original == "V");
  CHECK(m.find("t")->original == "V");
  CHECK(check_inverse_surjection(o, r, m).verdict == Verdict::Pass);
  CHECK(check_refinement(o, r, {}).valid);

  auto locked = model("state A default; or V { state B default; }");
  auto extra = model("state A default; or V { state B default; state N; }");
  auto lm = complete_mapping(locked, extra, {});
  CHECK_FALSE(lm.find("N"));
  auto res = check_inverse_surjection(locked, extra, lm);
  CHECK(res.failed());
  CHECK(res.elements == std::vector<ElementId>{"N"});
}

TEST_CASE("inverse surjection detects lost originals and dangling images") {
  auto o = model("state A default; state B;");
  auto r = model("state A default; state C;");
  RefinementMapping m = identity_mapping(r);
  m.pairs.erase("C");
  CHECK(check_inverse_surjection(o, r, m).failed());
  m.pairs["C"] = MappingEntry{"Ghost", ElementRole::State, ElementRole::State, {}};
  CHECK(check_inverse_surjection(o, r, m).failed());
  m.pairs["C"] = MappingEntry{"B", ElementRole::State, ElementRole::State, {}};
  CHECK(check_inverse_surjection(o, r, m).verdict == Verdict::Pass);
}

TEST_CASE("events and variables may only grow") {
  auto o = model("events a, b; vars x: int; state S default;");
  CHECK(check_event_var_inclusion(o, model("events a, b, c; vars x: int, y: bool; state S default;"))
            .verdict == Verdict::Pass);
  auto lost = check_event_var_inclusion(o, model("events a; vars x: int; state S default;"));
  CHECK(lost.failed());
  CHECK(lost.elements == std::vector<ElementId>{"event b"});
  CHECK(check_event_var_inclusion(o, model("events a, b; state S default;")).failed());
}

TEST_CASE("guard inclusion on first and later transitions") {
  auto o = model("events e; vars g: bool, h: bool; state A default; state B; trans t: A -> B on e if g;");
  auto r = model(R"(
    events e; vars g: bool, h: bool;
    state A default; state B; state M;
    trans t1: A -> M on e if g && h;
    trans t2: M -> B if h;
  )");
  RefinementMapping m = identity_mapping(r);
  m.pairs.erase("t1");
  m.pairs.erase("t2");
  m.pairs.erase("M");
  m.pairs.emplace("t1", MappingEntry{"t", ElementRole::Transition, ElementRole::Transition, "R2"});
  m.pairs.emplace("t2", MappingEntry{"t", ElementRole::Transition, ElementRole::Transition, "R2"});
  m.pairs.emplace("M", MappingEntry{"t", ElementRole::State, ElementRole::Transition, "R2"});
  auto ok = check_guard_inclusion(o, r, m);
  REQUIRE(ok.size() == 2);
  for (const auto& res : ok) CHECK(res.verdict == Verdict::Pass);

  r.transitions.at("t1").guard = Guard::conj(Guard::atom("h"), Guard::atom("g"));
  bool first_failed = false;
  for (const auto& res : check_guard_inclusion(o, r, m))
    if (res.elements == std::vector<ElementId>{"t1"}) first_failed = res.failed();
  CHECK(first_failed);
}

TEST_CASE("configuration lift on the robot") {
  auto o = data_model("fixtures/robot/initial.sc");
  auto r = data_model("golden/increment1.sc");
  auto m = complete_mapping(o, r, parse_mapping(read_data("golden/increment1.map"), o, r));
  auto of = flatten(o);
  auto rf = flatten(r);
  auto rel = lift_mapping(o, of, r, rf, m);
  REQUIRE(rel.originals_of.size() == rf.states.size());
  Lts ol(of);
  for (std::size_t i = 0; i < rf.states.size(); ++i) {
    const auto& c = rf.states[i];
    REQUIRE(rel.originals_of[i].size() == 1);
    auto expected = c.count("Idle") ? Configuration{"Idle"}
                    : c.count("Stopped") ? Configuration{"Stopped"} : Configuration{"RunRobot"};
    CHECK(ol.configuration(rel.originals_of[i][0]) == expected);
  }
  for (const auto& res : check_structural_inclusion(ol, Lts(rf), rel)) CHECK(res.verdict == Verdict::Pass);
}

TEST_CASE("structural inclusion agrees with bounded enumeration") {
  std::mt19937 rng(21);
  for (int i = 0; i < 80; ++i) {
    auto orig = scref::testing::random_lts(rng, 1 + rng() % 6, 3);
    auto ref = scref::testing::random_lts(rng, 1 + rng() % 7, 3);
    ConfigurationRelation rel;
    rel.originals_of.resize(ref.size());
    for (std::size_t n = 0; n < ref.size(); ++n)
      for (std::size_t k = 0; k < orig.size(); ++k)
        if (rng() % 3 == 0) rel.originals_of[n].push_back(k);
    auto fast = check_structural_inclusion(orig, ref, rel);
    auto slow = scref::testing::enumerate_structural(orig, ref, rel, 10);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t e = 0; e < fast.size(); ++e) CHECK((fast[e].verdict == Verdict::Pass) == slow[e]);
  }
}

TEST_CASE("reports as json and text") {
  auto o = data_model("golden/increment1.sc");
  auto r = data_model("fixtures/robot/mutations/drop_broadcast.sc");
  auto report = check_refinement(o, r, parse_mapping(read_data("golden/increment2.map"), o, r));
  auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j["overall"] == "Invalid");
  REQUIRE(j["entries"].is_array());
  CHECK(j["entries"].size() == report.entries.size());
  const auto& first = j["entries"][0];
  CHECK(first.contains("check"));
  CHECK(first.contains("elements"));
  CHECK(first.contains("result"));
  CHECK(first.contains("message"));
  auto text = report_to_text(report);
  CHECK(text.find("FAIL  R2.3/original-broadcast") != std::string::npos);
  CHECK(text.find("overall: Invalid") != std::string::npos);
  CHECK(std::is_sorted(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.check, a.result.elements) < std::tie(b.check, b.result.elements);
  }));
}
