#include "scref/model.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace scref {

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Basic: return "state";
    case StateKind::Or: return "or";
    case StateKind::And: return "and";
    case StateKind::Region: return "region";
    case StateKind::Final: return "final";
    case StateKind::HistoryShallow: return "history shallow";
    case StateKind::HistoryDeep: return "history deep";
    case StateKind::Fork: return "fork";
    case StateKind::Join: return "join";
    case StateKind::Split: return "split";
    case StateKind::Merge: return "merge";
  }
  return "?";
}

bool is_composite(StateKind kind) {
  return kind == StateKind::Or || kind == StateKind::And || kind == StateKind::Region;
}

bool is_pseudo(StateKind kind) {
  return kind == StateKind::Final || is_transient(kind);
}

bool is_transient(StateKind kind) {
  switch (kind) {
    case StateKind::HistoryShallow:
    case StateKind::HistoryDeep:
    case StateKind::Fork:
    case StateKind::Join:
    case StateKind::Split:
    case StateKind::Merge:
      return true;
    default:
      return false;
  }
}

bool is_leaf(StateKind kind) { return kind == StateKind::Basic || kind == StateKind::Final; }

std::string to_string(const Modifier& m) {
  std::string s;
  switch (m.base) {
    case BaseModifier::Abstract: s = "abstract"; break;
    case BaseModifier::Standard: s = "standard"; break;
    case BaseModifier::Locked: s = "locked"; break;
  }
  if (m.is_virtual) s += ", virtual";
  return s;
}

bool operator==(const State& a, const State& b) {
  return a.id == b.id && a.name == b.name && a.kind == b.kind && a.children == b.children &&
         a.is_default == b.is_default && a.entry == b.entry && a.exit == b.exit &&
         a.modifier == b.modifier;
}

bool operator==(const Transition& a, const Transition& b) {
  return a.id == b.id && a.source == b.source && a.target == b.target && a.trigger == b.trigger &&
         a.guard == b.guard && a.outputs == b.outputs && a.modifier == b.modifier;
}

Statechart Statechart::empty(std::string name) {
  Statechart sc;
  sc.name = std::move(name);
  State root;
  root.id = kRootId;
  root.name = sc.name;
  root.kind = StateKind::Or;
  sc.states.emplace(root.id, std::move(root));
  return sc;
}

const State* Statechart::find_state(const ElementId& id) const {
  auto it = states.find(id);
  return it == states.end() ? nullptr : &it->second;
}

const Transition* Statechart::find_transition(const ElementId& id) const {
  auto it = transitions.find(id);
  return it == transitions.end() ? nullptr : &it->second;
}

const State& Statechart::state(const ElementId& id) const {
  if (const auto* s = find_state(id)) return *s;
  throw std::out_of_range("unknown state '" + id + "'");
}

const Transition& Statechart::transition(const ElementId& id) const {
  if (const auto* t = find_transition(id)) return *t;
  throw std::out_of_range("unknown transition '" + id + "'");
}

bool Statechart::contains(const ElementId& id) const {
  return states.count(id) > 0 || transitions.count(id) > 0;
}

Hierarchy::Hierarchy(const Statechart& sc) : sc_(&sc) {
  for (const auto& [id, s] : sc.states)
    for (const auto& child : s.children) parent_.emplace(child, id);
}

std::optional<ElementId> Hierarchy::parent(const ElementId& id) const {
  auto it = parent_.find(id);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<ElementId> Hierarchy::ancestors(const ElementId& id) const {
  std::vector<ElementId> out;
  auto cur = parent(id);
  // bounded walk: an ill-formed model may contain a containment cycle
  while (cur && out.size() <= sc_->states.size()) {
    out.push_back(*cur);
    cur = parent(*cur);
  }
  return out;
}

bool Hierarchy::is_ancestor(const ElementId& ancestor, const ElementId& descendant) const {
  auto chain = ancestors(descendant);
  return std::find(chain.begin(), chain.end(), ancestor) != chain.end();
}

bool Hierarchy::is_ancestor_or_self(const ElementId& ancestor, const ElementId& descendant) const {
  return ancestor == descendant || is_ancestor(ancestor, descendant);
}

std::vector<ElementId> Hierarchy::descendants(const ElementId& id) const {
  std::vector<ElementId> out;
  std::vector<ElementId> stack{id};
  while (!stack.empty() && out.size() <= sc_->states.size()) {
    auto cur = stack.back();
    stack.pop_back();
    const auto* s = sc_->find_state(cur);
    if (!s) continue;
    for (auto it = s->children.rbegin(); it != s->children.rend(); ++it) {
      out.push_back(*it);
      stack.push_back(*it);
    }
  }
  return out;
}

ElementId Hierarchy::scope_of(const std::vector<ElementId>& ids) const {
  if (ids.empty()) return sc_->root;
  for (const auto& candidate : ancestors(ids.front())) {
    const auto* s = sc_->find_state(candidate);
    if (!s || (s->kind != StateKind::Or && s->kind != StateKind::Region)) continue;
    bool contains_all = std::all_of(ids.begin(), ids.end(),
                                    [&](const ElementId& x) { return is_ancestor(candidate, x); });
    if (contains_all) return candidate;
  }
  return sc_->root;
}

ElementId Hierarchy::container_of(const Transition& t) const {
  for (const auto& candidate : ancestors(t.source))
    if (is_ancestor(candidate, t.target)) return candidate;
  return sc_->root;
}

std::vector<std::string> referenced_identifiers(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '.'))
        ++j;
      std::string word(text.substr(i, j - i));
      if (word != "true" && word != "false") out.push_back(std::move(word));
      i = j;
    } else if (std::isdigit(c)) {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '.'))
        ++i;
    } else {
      ++i;
    }
  }
  return out;
}

namespace {

class WellFormedness {
 public:
  explicit WellFormedness(const Statechart& sc) : sc_(sc), h_(sc) {}

  std::vector<Diagnostic> run() {
    check_tree();
    for (const auto& [id, s] : sc_.states) check_state(s);
    for (const auto& [id, t] : sc_.transitions) check_transition(t);
    return std::move(out_);
  }

 private:
  void report(std::string code, const ElementId& id, std::string message) {
    out_.push_back({std::move(code), id, std::move(message)});
  }

  void check_tree() {
    const auto* root = sc_.find_state(sc_.root);
    if (!root) {
      report("containment", sc_.root, "root state is missing");
      return;
    }
    if (root->kind != StateKind::Or) report("containment", sc_.root, "root must be an Or-state");

    std::map<ElementId, int> parents;
    for (const auto& [id, s] : sc_.states)
      for (const auto& child : s.children) {
        if (!sc_.find_state(child))
          report("containment", id, "child '" + child + "' does not exist");
        ++parents[child];
      }
    for (const auto& [child, n] : parents)
      if (n > 1) report("containment", child, "state has more than one parent");
    if (parents.count(sc_.root)) report("containment", sc_.root, "root is contained by a state");

    // reachability from the root also rules out containment cycles
    std::set<ElementId> seen{sc_.root};
    std::vector<ElementId> stack{sc_.root};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      for (const auto& child : sc_.state(cur).children)
        if (sc_.find_state(child) && seen.insert(child).second) stack.push_back(child);
    }
    for (const auto& [id, s] : sc_.states)
      if (!seen.count(id)) report("containment", id, "state is not reachable from the root");

    for (const auto& [id, t] : sc_.transitions)
      if (sc_.find_state(id)) report("duplicate id", id, "id used by a state and a transition");
  }

  void check_action(const State& s, const std::optional<Action>& action, std::string_view which) {
    if (!action) return;
    if (is_pseudo(s.kind))
      report("pseudo action", s.id, std::string(to_string(s.kind)) + " cannot define " +
                                        std::string(which) + " actions");
    for (const auto& a : action->assignments) {
      if (!sc_.variables.count(a.variable))
        report("unknown variable", s.id, "assignment to undeclared variable '" + a.variable + "'");
      for (const auto& v : referenced_identifiers(a.expression))
        if (!sc_.variables.count(v))
          report("unknown variable", s.id, "expression references undeclared variable '" + v + "'");
    }
  }

  void check_state(const State& s) {
    if (s.modifier && s.modifier->is_virtual && s.modifier->base == BaseModifier::Locked)
      report("virtual locked", s.id, "virtual may only accompany abstract or standard");
    check_action(s, s.entry, "entry");
    check_action(s, s.exit, "exit");

    if (!is_composite(s.kind)) {
      if (!s.children.empty())
        report("children on leaf", s.id, std::string(to_string(s.kind)) + " cannot contain states");
    } else if (s.children.empty()) {
      report("empty composite", s.id, "composite state has no children");
    }

    auto parent = h_.parent(s.id);
    const State* p = parent ? sc_.find_state(*parent) : nullptr;
    if (s.kind == StateKind::Region && (!p || p->kind != StateKind::And))
      report("region outside and", s.id, "regions may only appear directly inside an And-state");
    if (p && p->kind == StateKind::And && s.kind != StateKind::Region)
      report("and child not region", s.id, "And-state children must be regions");
    if (s.is_default && (!p || p->kind == StateKind::And))
      report("default count", s.id, "default flag outside an Or-state or region");

    if ((s.kind == StateKind::Or || s.kind == StateKind::Region) && !s.children.empty()) {
      int defaults = 0;
      for (const auto& child : s.children) {
        const auto* c = sc_.find_state(child);
        if (!c || !c->is_default) continue;
        ++defaults;
        if (is_transient(c->kind))
          report("pseudo default", c->id, "a default state must not be a transient pseudo-state");
      }
      if (defaults != 1)
        report("default count", s.id,
               "expected exactly one default child, found " + std::to_string(defaults));
    }
  }

  void check_transition(const Transition& t) {
    const auto* src = sc_.find_state(t.source);
    const auto* tgt = sc_.find_state(t.target);
    if (!src) report("dangling transition", t.id, "unknown source '" + t.source + "'");
    if (!tgt) report("dangling transition", t.id, "unknown target '" + t.target + "'");
    for (const auto* end : {src, tgt}) {
      if (!end) continue;
      if (end->kind == StateKind::Region || end->id == sc_.root)
        report("region endpoint", t.id, "transitions cannot connect to '" + end->id + "'");
    }
    if (src && src->kind == StateKind::Final)
      report("final outgoing", t.id, "final state '" + src->id + "' has an outgoing transition");
    if (t.modifier && t.modifier->is_virtual)
      report("virtual transition", t.id, "transitions cannot be virtual");
    if (t.trigger && !sc_.events.count(*t.trigger))
      report("unknown event", t.id, "undeclared trigger '" + *t.trigger + "'");
    for (const auto& e : t.outputs)
      if (!sc_.events.count(e)) report("unknown event", t.id, "undeclared output '" + e + "'");
    std::vector<std::string> atoms;
    t.guard.collect_atoms(atoms);
    for (const auto& atom : atoms)
      for (const auto& v : referenced_identifiers(atom))
        if (!sc_.variables.count(v))
          report("unknown variable", t.id, "guard references undeclared variable '" + v + "'");
  }

  const Statechart& sc_;
  Hierarchy h_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> check_well_formed(const Statechart& sc) {
  return WellFormedness(sc).run();
}

}  // namespace scref
