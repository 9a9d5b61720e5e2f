#include <doctest.h>

#include <random>

#include <json.hpp>

#include "../support/generators.hpp"
#include "helpers.hpp"
#include "scref/refiner.hpp"
#include "scref/relation.hpp"

using namespace scref;
using scref::testing::data_model;
using scref::testing::model;
using scref::testing::read_data;

namespace {

// Payload fragments may reference elements outside themselves, so they go
// through the script parser rather than the model parser.
Statechart payload(const std::string& body) {
  auto script = parse_script("refine-transition x insert {" + body + "}");
  return std::get<RefineTransition>(script.steps.at(0)).inserted;
}

std::string refine_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const RefinementError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("robot scripts reproduce the golden files") {
  auto initial = data_model("fixtures/robot/initial.sc");
  auto inc1 = apply_script(initial, parse_script(read_data("fixtures/robot/increment1.script")));
  CHECK(serialize_statechart(inc1.model) == read_data("golden/increment1.sc"));
  CHECK(serialize_mapping(inc1.mapping) == read_data("golden/increment1.map"));
  CHECK(manifest_to_json(inc1) == read_data("golden/increment1.manifest.json"));

  auto both = apply_script(initial, parse_script(read_data("fixtures/robot/both.script")));
  CHECK(serialize_statechart(both.model) == read_data("golden/composed.sc"));
  CHECK(serialize_mapping(both.mapping) == read_data("golden/composed.map"));
  REQUIRE(both.steps.size() == 2);
  CHECK(both.steps[1].rule == "R2");
}

TEST_CASE("basic state into an or-state") {
  auto sc = model("events e; state A default; state B; trans t: A -> B on e;");
  auto r = refine_basic(sc, "B", RefineTarget::Or,
                        payload("events e; state X default; state Y; trans u: X -> Y on e;"));
  const State& b = r.model.state("B");
  CHECK(b.kind == StateKind::Or);
  CHECK(b.modifier == Modifier{BaseModifier::Standard, true});
  CHECK(b.children == std::vector<ElementId>{"B.r1", "B.r2"});
  CHECK(r.model.state("B.r1").name == "X");
  CHECK(r.model.state("B.r1").is_default);
  CHECK(r.model.transition("B.r3").source == "B.r1");
  CHECK(r.created == std::vector<ElementId>{"B.r1", "B.r2", "B.r3"});
  CHECK(r.mapping.find("B.r3")->original == "B");
  CHECK(r.mapping.find("B.r3")->created_by == std::optional<std::string>("R1"));
  CHECK(r.mapping.find("B")->created_by == std::optional<std::string>("R1"));
  CHECK(r.model.transition("t").target == "B");
  CHECK(check_refinement(sc, r.model, r.mapping).valid);

  auto with_mod = refine_basic(sc, "B", RefineTarget::Or, payload("state X default;"),
                               Modifier{BaseModifier::Locked, false});
  CHECK(with_mod.model.state("B").modifier == Modifier{BaseModifier::Locked, false});
}

TEST_CASE("basic state into an and-state") {
  auto sc = model("<<abstract>> state A default;");
  auto r = refine_basic(sc, "A", RefineTarget::And,
                        payload("region R1 { state X default; } <<locked>> region R2 { state Y default; }"));
  CHECK(r.model.state("A").kind == StateKind::And);
  CHECK(r.model.state("A.r1").modifier == Modifier{BaseModifier::Abstract, true});
  CHECK(r.model.state("A.r3").modifier == Modifier{BaseModifier::Locked, false});
  CHECK(check_refinement(sc, r.model, r.mapping).valid);
}

TEST_CASE("basic refinement errors") {
  auto sc = model(R"(
    events e;
    <<locked>> state L default; state A; or P { state X default; }
    trans t: A -> L on e;
  )");
  CHECK(refine_error([&] { refine_basic(sc, "L", RefineTarget::Basic, Statechart::empty("p")); })
            .find("locked") != std::string::npos);
  CHECK(refine_error([&] { refine_basic(sc, "P", RefineTarget::Basic, Statechart::empty("p")); }) != "");
  CHECK(refine_error([&] { refine_basic(sc, "Nope", RefineTarget::Basic, Statechart::empty("p")); }) ==
        "unknown state 'Nope'");
  CHECK(refine_error([&] { refine_basic(sc, "A", RefineTarget::Or, Statechart::empty("p")); }) ==
        "refinement into or needs a payload");
  CHECK(refine_error([&] { refine_basic(sc, "A", RefineTarget::Basic, payload("state X default;")); }) ==
        "refinement into a basic state takes no payload");
  CHECK(refine_error([&] { refine_basic(sc, "A", RefineTarget::And, payload("state X default;")); })
            .find("must consist of regions") != std::string::npos);
  CHECK(refine_error([&] {
          refine_basic(sc, "A", RefineTarget::Or,
                       payload("events e; state X default; state L2; trans u: X -> L on e;"));
        }) != "");
  // abstract -> abstract,virtual is only allowed when the tool does it
  auto ab = model("<<abstract>> state A default;");
  CHECK(refine_error([&] {
          refine_basic(ab, "A", RefineTarget::Basic, Statechart::empty("p"),
                       Modifier{BaseModifier::Abstract, true});
        }) != "");
  auto ok = refine_basic(ab, "A", RefineTarget::Basic, Statechart::empty("p"),
                         Modifier{BaseModifier::Standard, false});
  CHECK(ok.model.state("A").modifier == Modifier{BaseModifier::Standard, false});
}

TEST_CASE("transition refinement counts") {
  auto sc = model(R"(
    events e, x; vars g: bool, h: bool;
    state A default; state B; state C;
    trans t: A -> B on e if g emit x;
    trans u: B -> C;
  )");
  auto ins = payload(R"(
    events e, x; vars g: bool, h: bool;
    state M; state N;
    trans a: A -> M on e if g;
    trans b: M -> B if h emit x;
    trans c: M -> N if !h;
    trans d: N -> B emit x;
  )");
  auto r = refine_transition(sc, "t", ins);
  CHECK(r.rule == "R2");
  CHECK(r.model.states.size() == sc.states.size() + 2);
  CHECK(r.model.transitions.size() == sc.transitions.size() - 1 + 4);
  CHECK_FALSE(r.model.find_transition("t"));
  CHECK(r.created.size() == 6);
  for (const auto& id : r.created) CHECK(r.mapping.find(id)->original == "t");
  CHECK(check_refinement(sc, r.model, r.mapping).valid);

  auto same = refine_transition(sc, "t", Statechart::empty("p"));
  CHECK(same.model == sc);
  CHECK(same.created.empty());
}

TEST_CASE("transition refinement rejects constraint violations") {
  auto sc = model("events e, x; state A default; state B; trans t: A -> B on e emit x;");
  CHECK(refine_error([&] {
          refine_transition(sc, "t", payload("events e, x; state M; trans a: A -> M on x; trans b: M -> B emit x;"));
        }).find("R2.1") != std::string::npos);
  CHECK(refine_error([&] {
          refine_transition(sc, "t", payload("events e, x; state M; trans a: A -> M on e; trans b: M -> B;"));
        }).find("R2.3") != std::string::npos);
  CHECK(refine_error([&] {
          refine_transition(sc, "t", payload("events e, x; state M default; trans a: A -> M on e; trans b: M -> B emit x;"));
        }).find("non-default basic") != std::string::npos);
  CHECK(refine_error([&] { refine_transition(sc, "zz", Statechart::empty("p")); }) ==
        "unknown transition 'zz'");
  auto locked = model("events e; state A default; state B; <<locked>> trans t: A -> B on e;");
  CHECK(refine_error([&] { refine_transition(locked, "t", Statechart::empty("p")); }).find("locked") !=
        std::string::npos);
}

TEST_CASE("or-state to and-state, added regions and deep history") {
  auto sc = model("events e; or P default { state A default; history shallow H; } state C; trans t: A -> C on e;");
  auto r3 = refine_or_to_and(sc, "P", "extra");
  CHECK(r3.rule == "R3");
  CHECK(r3.model.state("P").kind == StateKind::And);
  CHECK(r3.model.state("P").children.size() == 2);
  const State& wrapper = r3.model.state(r3.model.state("P").children[0]);
  CHECK(wrapper.name == "P");
  CHECK(wrapper.children == std::vector<ElementId>{"A", "H"});
  const State& added = r3.model.state(r3.model.state("P").children[1]);
  CHECK(added.name == "extra");
  CHECK(added.modifier == Modifier{BaseModifier::Abstract, true});
  CHECK(check_refinement(sc, r3.model, r3.mapping).valid);

  auto r4 = add_region(r3.model, "P", "more");
  CHECK(r4.rule == "R4");
  CHECK(r4.model.state("P").children.size() == 3);
  CHECK(check_refinement(r3.model, r4.model, r4.mapping).valid);
  CHECK_THROWS_AS(add_region(sc, "P", "x"), RefinementError);
  CHECK_THROWS_AS(refine_or_to_and(r3.model, "P", "x"), RefinementError);

  auto r7 = history_to_deep(sc, "H");
  CHECK(r7.rule == "R7");
  CHECK(r7.model.state("H").kind == StateKind::HistoryDeep);
  CHECK(check_refinement(sc, r7.model, r7.mapping).valid);
  CHECK_THROWS_AS(history_to_deep(r7.model, "H"), RefinementError);
}

TEST_CASE("modifier changes") {
  auto sc = model("<<abstract>> state A default; state B; trans t: A -> B;");
  auto r = set_modifier(sc, "A", Modifier{BaseModifier::Locked, false});
  CHECK(r.model.state("A").modifier == Modifier{BaseModifier::Locked, false});
  CHECK_THROWS_AS(set_modifier(sc, "t", Modifier{BaseModifier::Standard, true}), RefinementError);
  CHECK_THROWS_AS(set_modifier(r.model, "A", Modifier{BaseModifier::Standard, false}), RefinementError);
  CHECK_THROWS_AS(set_modifier(sc, "A", Modifier{BaseModifier::Abstract, true}), RefinementError);
  CHECK(identity_refinement(sc).model == sc);
}

TEST_CASE("script errors carry the step index") {
  auto sc = data_model("fixtures/robot/initial.sc");
  try {
    apply_script(sc, parse_script("identity;\nrefine-basic Idle into basic;\n"));
    FAIL("expected an error");
  } catch (const RefinementError& e) {
    CHECK(e.step() == std::optional<std::size_t>(1));
    CHECK(std::string(e.what()).rfind("step 1: ", 0) == 0);
  }
}

TEST_CASE("manifest lists each step") {
  auto sc = data_model("fixtures/robot/initial.sc");
  auto res = apply_script(sc, parse_script(read_data("fixtures/robot/both.script")));
  auto j = nlohmann::json::parse(manifest_to_json(res));
  REQUIRE(j["steps"].size() == 2);
  CHECK(j["steps"][1]["rule"] == "R2");
  CHECK(j["steps"][1]["created"].size() == 6);
}

TEST_CASE("random single steps validate") {
  std::mt19937 rng(17);
  using scref::testing::RuleKind;
  for (auto kind : {RuleKind::R1Basic, RuleKind::R1Or, RuleKind::R1And, RuleKind::R2, RuleKind::R3,
                    RuleKind::R4, RuleKind::R7}) {
    int applied = 0;
    for (int i = 0; i < 200 && applied < 10; ++i) {
      auto sc = scref::testing::random_model(rng);
      auto step = scref::testing::random_step(rng, sc, kind);
      if (!step) continue;
      ++applied;
      auto r = apply_step(sc, *step);
      CHECK(check_well_formed(r.model).empty());
      auto report = check_refinement(sc, r.model, r.mapping);
      CHECK_MESSAGE(report.valid, serialize_statechart(sc) << serialize_script({{*step}})
                                                           << report_to_text(report));
    }
    CHECK(applied == 10);
  }
}

TEST_CASE("inserted states may not land inside a locked state") {
  auto sc = model(R"(
    events e;
    <<locked>> or L default { state A default; state B; <<abstract>> trans t: A -> B on e; }
  )");
  auto err = refine_error([&] {
    refine_transition(sc, "t", payload("events e; state M; trans a: A -> M on e; trans b: M -> B;"));
  });
  CHECK(err.find("'L' is locked") != std::string::npos);
  // without new states the locked container is untouched
  auto r = refine_transition(sc, "t", payload("events e; trans a: A -> B on e;"));
  CHECK(check_refinement(sc, r.model, r.mapping).valid);
}

TEST_CASE("chain steps always preempted by an enclosing transition are rejected") {
  auto sc = model(R"(
    events e, x;
    or P default { state A default; state B; }
    trans t: A -> B on e emit x;
    trans spin: P -> P;
  )");
  auto err = refine_error([&] {
    refine_transition(sc, "t", payload("events e, x; state M; trans a: A -> M on e; trans b: M -> B emit x;"));
  });
  CHECK(err.find("preempted by 'spin'") != std::string::npos);
}

TEST_CASE("strengthening a triggerless step needs a negated alternative") {
  auto sc = model(R"(
    events e, x; vars g: bool;
    state A default; state B; state M;
    trans a: A -> M on e;
    trans b: M -> B emit x;
  )");
  CHECK(refine_error([&] {
          refine_transition(sc, "b", payload("events x; vars g: bool; state N; trans p: M -> N if g; "
                                             "trans q: N -> B emit x;"));
        }).find("R2.4") != std::string::npos);
  auto ok = refine_transition(sc, "b", payload("events x; vars g: bool; state N; trans p: M -> N if g; "
                                               "trans r: M -> B if !g emit x; trans q: N -> B emit x;"));
  CHECK(check_refinement(sc, ok.model, ok.mapping).valid);
  // a triggered transition may still strengthen its first guard
  auto first = refine_transition(sc, "a", payload("events e; vars g: bool; trans p: A -> M on e if g;"));
  CHECK(check_refinement(sc, first.model, first.mapping).valid);
}

TEST_CASE("refining an inserted state keeps the composed chain valid") {
  auto sc = model(R"(
    events e, f, x; vars g: bool;
    state A default; state B;
    trans t: A -> B on e emit x;
  )");
  auto script = parse_script(R"(
    refine-transition t insert { events e, x; state M; trans a: A -> M on e; trans b: M -> B emit x; }
    refine-basic t.r1 into or { events f; state P default; state Q; trans u: P -> Q on f; }
    refine-transition t.r1.r3 insert { events f; vars g: bool; state N; trans v: P -> N on f if g; trans w: N -> Q on f; }
  )");
  auto res = apply_script(sc, script);
  auto report = check_refinement(sc, res.model, res.mapping);
  CHECK_MESSAGE(report.valid, report_to_text(report));
}
