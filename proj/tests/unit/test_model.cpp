#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "scref/model.hpp"

using namespace scref;
using scref::testing::model;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("guard text and equality") {
  Guard g = Guard::conj(Guard::conj(Guard::atom("x>1"), Guard::negate(Guard::atom("y"))), Guard::atom("z"));
  CHECK(g.to_string() == "x>1 && !y && z");
  CHECK(Guard::conj(Guard::atom("a"), Guard::conj(Guard::atom("b"), Guard::atom("c"))).to_string() ==
        "a && (b && c)");
  CHECK(Guard().to_string() == "true");
  CHECK(Guard::atom("a") == Guard::atom("a"));
  CHECK_FALSE(Guard::atom("a") == Guard::atom("b"));
  CHECK(Guard::disj(Guard::atom("a"), Guard::atom("b")).has_disjunction());
  std::vector<std::string> atoms;
  g.collect_atoms(atoms);
  CHECK(atoms == std::vector<std::string>{"x>1", "y", "z"});
}

TEST_CASE("guard extension is a left-nested conjunction") {
  Guard b = Guard::atom("b");
  Guard p = Guard::atom("p");
  CHECK(guard_extends(b, b));
  CHECK(guard_extends(b, Guard::conj(b, p)));
  CHECK(guard_extends(b, Guard::conj(Guard::conj(b, p), Guard::atom("q"))));
  CHECK_FALSE(guard_extends(b, Guard::conj(p, b)));
  CHECK_FALSE(guard_extends(b, Guard::disj(b, p)));
  CHECK_FALSE(guard_extends(b, p));
  CHECK(guard_extends(Guard(), p));
  CHECK_FALSE(guard_extends(Guard(), Guard::disj(b, p)));
  CHECK(conj_simplified(Guard(), p) == p);
  CHECK(conj_simplified(p, Guard()) == p);
}

TEST_CASE("literal negation in both directions") {
  Guard g = Guard::atom("g");
  CHECK(is_literal_negation(g, Guard::negate(g)));
  CHECK(is_literal_negation(Guard::negate(g), g));
  CHECK_FALSE(is_literal_negation(g, g));
  CHECK_FALSE(is_literal_negation(g, Guard::negate(Guard::atom("h"))));
}

TEST_CASE("hierarchy queries") {
  auto sc = model(R"(
    or P default { state A default; and Q { region R1 { state B default; } region R2 { state C default; } } }
    state D;
  )");
  Hierarchy h(sc);
  CHECK(h.parent("A") == "P");
  CHECK(h.ancestors("B") == std::vector<ElementId>{"R1", "Q", "P", kRootId});
  CHECK(h.is_ancestor("P", "C"));
  CHECK_FALSE(h.is_ancestor("C", "C"));
  CHECK(h.is_ancestor_or_self("C", "C"));
  CHECK(h.scope_of({"B", "C"}) == "P");
  CHECK(h.scope_of({"A", "D"}) == kRootId);
  CHECK(h.scope_of({"A"}) == "P");
  auto d = h.descendants("Q");
  CHECK(d.size() == 4);
}

TEST_CASE("well-formed models produce no diagnostics") {
  auto sc = model(R"(
    events go; vars n: int;
    state A default { entry: n = n + 1; exit: n = 0; }
    or B { state B1 default; history shallow H; final F; }
    trans t1: A -> B on go if n > 2;
    trans t2: B1 -> H;
  )");
  CHECK(check_well_formed(sc).empty());
}

TEST_CASE("structural violations are diagnosed") {
  Statechart sc = model("state A default; state B;");
  SUBCASE("two defaults") {
    sc.states.at("B").is_default = true;
    CHECK(has_code(check_well_formed(sc), "default count"));
  }
  SUBCASE("no default") {
    sc.states.at("A").is_default = false;
    CHECK(has_code(check_well_formed(sc), "default count"));
  }
  SUBCASE("dangling transition") {
    Transition t;
    t.id = "t";
    t.source = "A";
    t.target = "Z";
    sc.transitions.emplace("t", t);
    CHECK(has_code(check_well_formed(sc), "dangling transition"));
  }
  SUBCASE("children on a leaf") {
    State c;
    c.id = "C";
    c.name = "C";
    c.is_default = true;
    sc.states.emplace("C", c);
    sc.states.at("A").children.push_back("C");
    CHECK(has_code(check_well_formed(sc), "children on leaf"));
  }
  SUBCASE("final with outgoing transition") {
    sc.states.at("B").kind = StateKind::Final;
    Transition t;
    t.id = "t";
    t.source = "B";
    t.target = "A";
    sc.transitions.emplace("t", t);
    CHECK(has_code(check_well_formed(sc), "final outgoing"));
  }
  SUBCASE("actions on pseudo-states") {
    sc.states.at("B").kind = StateKind::Final;
    sc.states.at("B").entry = Action{};
    CHECK(has_code(check_well_formed(sc), "pseudo action"));
  }
  SUBCASE("virtual on a locked state") {
    sc.states.at("B").modifier = Modifier{BaseModifier::Locked, true};
    CHECK(has_code(check_well_formed(sc), "virtual locked"));
  }
  SUBCASE("undeclared event") {
    Transition t;
    t.id = "t";
    t.source = "A";
    t.target = "B";
    t.trigger = "nope";
    sc.transitions.emplace("t", t);
    CHECK(has_code(check_well_formed(sc), "unknown event"));
  }
}

TEST_CASE("and-states hold only regions") {
  Statechart sc = model("and A default { region R { state X default; } }");
  CHECK(check_well_formed(sc).empty());
  sc.states.at("R").kind = StateKind::Or;
  CHECK(has_code(check_well_formed(sc), "and child not region"));
}

TEST_CASE("identifiers referenced by expressions") {
  CHECK(referenced_identifiers("a.b + 2 * c >= true") == std::vector<std::string>{"a.b", "c"});
  CHECK(referenced_identifiers("42").empty());
}
