#include "scref/refiner.hpp"

#include <json.hpp>

#include "scref/constraints.hpp"
#include "scref/modifiers.hpp"
#include "scref/relation.hpp"

namespace scref {

RefinementError::RefinementError(const std::string& message, std::optional<std::size_t> step)
    : std::runtime_error(step ? "step " + std::to_string(*step) + ": " + message : message),
      detail_(message),
      step_(step) {}

namespace {

std::vector<std::string> obligations(const std::string& rule) {
  if (rule == "R1")
    return {"R1/original-name", "R1/original-transitions", "R5-R6/pseudo-states",
            "modifier/table", "modifier/virtual-placement"};
  if (rule == "R2")
    return {"R2.1/original-events", "R2.2/minimal-guard", "R2.3/original-broadcast",
            "R2.4/exclusive-guards", "R2/reachability"};
  if (rule == "R3" || rule == "R4")
    return {"R3-R4/substate-mappings", "R1/original-name", "modifier/virtual-placement"};
  if (rule == "R7") return {"R7/history", "modifier/table"};
  if (rule == "modifier") return {"modifier/table", "modifier/virtual-placement"};
  return {};
}

// Generates `<base>.r<N>` with the smallest N unused in either model.
class IdAllocator {
 public:
  IdAllocator(const Statechart& before, const Statechart& after) : before_(before), after_(after) {}

  ElementId next(const ElementId& base) {
    for (std::size_t n = 1;; ++n) {
      ElementId id = base + ".r" + std::to_string(n);
      if (!before_.contains(id) && !after_.contains(id) && taken_.insert(id).second) return id;
    }
  }

 private:
  const Statechart& before_;
  const Statechart& after_;
  std::set<ElementId> taken_;
};

const State& require_state(const Statechart& sc, const ElementId& id) {
  const State* s = sc.find_state(id);
  if (!s || id == sc.root) throw RefinementError("unknown state '" + id + "'");
  return *s;
}

void require_refinable(const Statechart& sc, const ElementId& id) {
  if (effective_modifier(sc, id).base == BaseModifier::Locked)
    throw RefinementError("'" + id + "' is locked and cannot be refined");
}

void merge_declarations(Statechart& out, const Statechart& payload) {
  out.events.insert(payload.events.begin(), payload.events.end());
  for (const auto& [name, type] : payload.variables) {
    auto [it, inserted] = out.variables.emplace(name, type);
    if (!inserted && it->second != type)
      throw RefinementError("variable '" + name + "' redeclared as " + type + " (was " + it->second + ")");
  }
}

bool payload_empty(const Statechart& payload) {
  return payload.states.size() <= 1 && payload.transitions.empty();
}

void map_created(RefinementMapping& m, const Statechart& out, const ElementId& refined,
                 const Statechart& in, const ElementId& original, const std::string& rule) {
  m.pairs[refined] = MappingEntry{original, *role_of(out, refined), *role_of(in, original), rule};
}

// Copies payload state `local` (and its subtree) into `out`; returns the new id.
ElementId import_state(Statechart& out, const Statechart& payload, const ElementId& local,
                       const ElementId& base, IdAllocator& ids,
                       std::map<ElementId, ElementId>& renamed, std::vector<ElementId>& created) {
  State s = payload.state(local);
  s.id = ids.next(base);
  renamed[local] = s.id;
  created.push_back(s.id);
  auto children = std::move(s.children);
  s.children.clear();
  ElementId id = s.id;
  out.states.emplace(id, std::move(s));
  for (const auto& child : children) {
    auto c = import_state(out, payload, child, base, ids, renamed, created);
    out.states.at(id).children.push_back(c);
  }
  return id;
}

void validate_output(const Statechart& in, const Statechart& out, const RefinementMapping& mapping) {
  auto diags = check_well_formed(out);
  if (!diags.empty())
    throw RefinementError("result is not well-formed: " + diags.front().code + " at '" +
                          diags.front().element + "': " + diags.front().message);
  for (const auto& r : check_modifier_table(in, out, mapping))
    if (r.failed()) throw RefinementError("modifier of '" + r.elements.front() + "': " + r.message);
  for (const auto& r : check_virtual_placement(in, out, mapping))
    if (r.failed()) throw RefinementError("'" + r.elements.front() + "': " + r.message);
  for (const auto& r : check_locked(ConstraintContext(in, out, mapping)))
    if (r.failed()) throw RefinementError("'" + r.elements.front() + "' is locked: " + r.message);
}

RefinementResult finish(const Statechart& in, Statechart out, RefinementMapping mapping,
                        std::string rule, std::vector<ElementId> created,
                        std::vector<ElementId> neighbors) {
  validate_output(in, out, mapping);
  RefinementResult r;
  r.model = std::move(out);
  r.mapping = std::move(mapping);
  r.constraints = obligations(rule);
  r.rule = std::move(rule);
  r.created = std::move(created);
  r.neighbors = std::move(neighbors);
  return r;
}

std::vector<ElementId> incident_transitions(const Statechart& sc, const ElementId& state) {
  std::vector<ElementId> out;
  for (const auto& [id, t] : sc.transitions)
    if (t.source == state || t.target == state) out.push_back(id);
  return out;
}

}  // namespace

RefinementResult refine_basic(const Statechart& sc, const ElementId& state, RefineTarget target,
                              const Statechart& payload, const std::optional<Modifier>& modifier) {
  const State& s = require_state(sc, state);
  if (s.kind != StateKind::Basic)
    throw RefinementError("'" + state + "' is " + std::string(to_string(s.kind)) +
                          ", not a basic state");
  require_refinable(sc, state);
  const auto& top = payload.state(payload.root).children;
  if (target == RefineTarget::Basic && !payload_empty(payload))
    throw RefinementError("refinement into a basic state takes no payload");
  if (target != RefineTarget::Basic && top.empty())
    throw RefinementError("refinement into " + std::string(to_string(target)) + " needs a payload");
  for (const auto& c : top) {
    bool region = payload.state(c).kind == StateKind::Region;
    if (target == RefineTarget::And && !region)
      throw RefinementError("payload of an and-refinement must consist of regions ('" + c + "')");
    if (target == RefineTarget::Or && region)
      throw RefinementError("payload of an or-refinement cannot contain regions ('" + c + "')");
  }

  Statechart out = sc;
  merge_declarations(out, payload);
  Modifier before = effective_modifier(sc, state);
  {
    State& refined = out.states.at(state);
    switch (target) {
      case RefineTarget::Basic:
        if (modifier) refined.modifier = *modifier;
        break;
      case RefineTarget::Or: {
        refined.kind = StateKind::Or;
        auto base = modifier ? modifier->base : before.base;
        refined.modifier = Modifier{base, base != BaseModifier::Locked};
        break;
      }
      case RefineTarget::And:
        refined.kind = StateKind::And;
        if (modifier) refined.modifier = *modifier;
        break;
    }
  }

  IdAllocator ids(sc, out);
  std::map<ElementId, ElementId> renamed;
  std::vector<ElementId> created;
  for (const auto& c : top) {
    auto id = import_state(out, payload, c, state, ids, renamed, created);
    out.states.at(state).children.push_back(id);
  }
  if (target == RefineTarget::And) {
    auto base = effective_modifier(out, state).base;
    for (const auto& c : top) {
      State& region = out.states.at(renamed.at(c));
      auto b = region.modifier ? region.modifier->base : base;
      region.modifier = Modifier{b, b != BaseModifier::Locked};
    }
  }
  for (const auto& [local, pt] : payload.transitions) {
    Transition t = pt;
    t.id = ids.next(state);
    for (auto* end : {&t.source, &t.target}) {
      auto it = renamed.find(*end);
      if (it == renamed.end())
        throw RefinementError("payload transition '" + local + "' leaves the payload ('" + *end + "')");
      *end = it->second;
    }
    created.push_back(t.id);
    ElementId id = t.id;
    out.transitions.emplace(id, std::move(t));
  }

  RefinementMapping mapping = identity_mapping(sc);
  map_created(mapping, out, state, sc, state, "R1");
  for (const auto& id : created) map_created(mapping, out, id, sc, state, "R1");
  return finish(sc, std::move(out), std::move(mapping), "R1", std::move(created),
                incident_transitions(sc, state));
}

namespace {

// Under outer-first priority an unguarded step leaving an inserted state never
// fires when an enclosing state has an unguarded transition on the same
// trigger, so the chain could not complete.
void reject_preempted_steps(const RefinementResult& r) {
  const Statechart& m = r.model;
  Hierarchy h(m);
  std::set<ElementId> created(r.created.begin(), r.created.end());
  for (const auto& id : r.created) {
    const Transition* c = m.find_transition(id);
    if (!c || !c->guard.is_true() || !created.count(c->source)) continue;
    for (const auto& [uid, u] : m.transitions)
      if (u.trigger == c->trigger && u.guard.is_true() && h.is_ancestor(u.source, c->source))
        throw RefinementError("'" + id + "' would always be preempted by '" + uid + "'");
  }
}

}  // namespace

RefinementResult refine_transition(const Statechart& sc, const ElementId& transition,
                                   const Statechart& inserted) {
  const Transition* t = sc.find_transition(transition);
  if (!t) throw RefinementError("unknown transition '" + transition + "'");
  require_refinable(sc, transition);
  for (const auto& end : {t->source, t->target})
    if (is_transient(sc.state(end).kind))
      throw RefinementError("'" + transition + "' touches the pseudo-state '" + end + "'");
  if (payload_empty(inserted)) {
    auto r = identity_refinement(sc);
    r.rule = "R2";
    return r;
  }

  Hierarchy h(sc);
  Statechart out = sc;
  out.transitions.erase(transition);
  merge_declarations(out, inserted);
  ElementId scope = h.scope_of({t->source, t->target});

  IdAllocator ids(sc, out);
  std::map<ElementId, ElementId> renamed;
  std::vector<ElementId> created;
  for (const auto& local : inserted.state(inserted.root).children) {
    const State& p = inserted.state(local);
    if (p.kind != StateKind::Basic || p.is_default)
      throw RefinementError("inserted state '" + local + "' must be a non-default basic state");
    auto id = import_state(out, inserted, local, transition, ids, renamed, created);
    out.states.at(scope).children.push_back(id);
  }
  auto resolve = [&](const ElementId& name) -> ElementId {
    if (auto it = renamed.find(name); it != renamed.end()) return it->second;
    for (const auto& end : {t->source, t->target})
      if (name == end || name == sc.state(end).name) return end;
    throw RefinementError("'" + name + "' is neither an inserted state nor an endpoint of '" +
                          transition + "'");
  };
  for (const auto& [local, pt] : inserted.transitions) {
    Transition nt = pt;
    nt.id = ids.next(transition);
    nt.source = resolve(pt.source);
    nt.target = resolve(pt.target);
    created.push_back(nt.id);
    out.transitions.emplace(created.back(), std::move(nt));
  }

  RefinementMapping mapping = identity_mapping(sc);
  mapping.pairs.erase(transition);
  for (const auto& id : created) map_created(mapping, out, id, sc, transition, "R2");

  auto result = finish(sc, std::move(out), std::move(mapping), "R2", std::move(created),
                       {t->source, t->target});
  reject_preempted_steps(result);
  ConstraintContext ctx(sc, result.model, result.mapping);
  const EntryGroup* g = ctx.group(transition);
  for (const auto& id : result.constraints) {
    auto r = find_constraint(id)->evaluate(*g, ctx);
    if (r.failed()) throw RefinementError(id + ": " + r.message);
  }
  return result;
}

namespace {

// Shared by R3 and R4: an «abstract, virtual» region with a default stub.
ElementId add_stub_region(Statechart& out, const ElementId& owner, const std::string& name,
                          IdAllocator& ids, std::vector<ElementId>& created) {
  if (name.empty()) throw RefinementError("region name must not be empty");
  State region;
  region.id = ids.next(owner);
  region.name = name;
  region.kind = StateKind::Region;
  region.modifier = Modifier{BaseModifier::Abstract, true};
  State stub;
  stub.id = ids.next(owner);
  stub.name = name + "_init";
  stub.is_default = true;
  region.children.push_back(stub.id);
  created.push_back(region.id);
  created.push_back(stub.id);
  ElementId id = region.id;
  ElementId stub_id = stub.id;
  out.states.emplace(stub_id, std::move(stub));
  out.states.emplace(id, std::move(region));
  out.states.at(owner).children.push_back(id);
  return id;
}

}  // namespace

RefinementResult refine_or_to_and(const Statechart& sc, const ElementId& state,
                                  const std::string& region) {
  const State& s = require_state(sc, state);
  if (s.kind != StateKind::Or)
    throw RefinementError("'" + state + "' is " + std::string(to_string(s.kind)) + ", not an or-state");
  require_refinable(sc, state);

  Statechart out = sc;
  IdAllocator ids(sc, out);
  std::vector<ElementId> created;
  State wrapper;
  wrapper.id = ids.next(state);
  wrapper.name = s.name;
  wrapper.kind = StateKind::Region;
  wrapper.children = s.children;
  created.push_back(wrapper.id);
  State& refined = out.states.at(state);
  refined.kind = StateKind::And;
  refined.children = {wrapper.id};
  ElementId wrapper_id = wrapper.id;
  out.states.emplace(wrapper_id, std::move(wrapper));
  add_stub_region(out, state, region, ids, created);

  RefinementMapping mapping = identity_mapping(sc);
  map_created(mapping, out, state, sc, state, "R3");
  for (const auto& id : created) map_created(mapping, out, id, sc, state, "R3");
  return finish(sc, std::move(out), std::move(mapping), "R3", std::move(created), {});
}

RefinementResult add_region(const Statechart& sc, const ElementId& state, const std::string& region) {
  const State& s = require_state(sc, state);
  if (s.kind != StateKind::And)
    throw RefinementError("'" + state + "' is " + std::string(to_string(s.kind)) + ", not an and-state");
  require_refinable(sc, state);

  Statechart out = sc;
  IdAllocator ids(sc, out);
  std::vector<ElementId> created;
  add_stub_region(out, state, region, ids, created);

  RefinementMapping mapping = identity_mapping(sc);
  map_created(mapping, out, state, sc, state, "R4");
  for (const auto& id : created) map_created(mapping, out, id, sc, state, "R4");
  return finish(sc, std::move(out), std::move(mapping), "R4", std::move(created), {});
}

RefinementResult history_to_deep(const Statechart& sc, const ElementId& state) {
  const State& s = require_state(sc, state);
  if (s.kind != StateKind::HistoryShallow)
    throw RefinementError("'" + state + "' is " + std::string(to_string(s.kind)) +
                          ", not a shallow history state");
  require_refinable(sc, state);
  Statechart out = sc;
  out.states.at(state).kind = StateKind::HistoryDeep;
  RefinementMapping mapping = identity_mapping(sc);
  map_created(mapping, out, state, sc, state, "R7");
  return finish(sc, std::move(out), std::move(mapping), "R7", {}, incident_transitions(sc, state));
}

RefinementResult set_modifier(const Statechart& sc, const ElementId& element,
                              const Modifier& modifier) {
  if (!sc.contains(element) || element == sc.root)
    throw RefinementError("unknown element '" + element + "'");
  Statechart out = sc;
  if (auto it = out.transitions.find(element); it != out.transitions.end()) {
    if (modifier.is_virtual) throw RefinementError("transitions cannot be virtual");
    it->second.modifier = modifier;
  } else {
    out.states.at(element).modifier = modifier;
  }
  return finish(sc, std::move(out), identity_mapping(sc), "modifier", {}, {});
}

RefinementResult identity_refinement(const Statechart& sc) {
  RefinementResult r;
  r.model = sc;
  r.mapping = identity_mapping(sc);
  r.rule = "identity";
  return r;
}

RefinementResult apply_step(const Statechart& sc, const RefinementStep& step) {
  struct Visitor {
    const Statechart& sc;
    RefinementResult operator()(const RefineBasic& s) const {
      return refine_basic(sc, s.state, s.target, s.payload, s.modifier);
    }
    RefinementResult operator()(const RefineTransition& s) const {
      return refine_transition(sc, s.transition, s.inserted);
    }
    RefinementResult operator()(const OrToAnd& s) const { return refine_or_to_and(sc, s.state, s.region); }
    RefinementResult operator()(const AddRegion& s) const { return add_region(sc, s.state, s.region); }
    RefinementResult operator()(const HistoryToDeep& s) const { return history_to_deep(sc, s.state); }
    RefinementResult operator()(const SetModifier& s) const {
      return set_modifier(sc, s.element, s.modifier);
    }
    RefinementResult operator()(const Identity&) const { return identity_refinement(sc); }
  };
  return std::visit(Visitor{sc}, step);
}

ScriptResult apply_script(const Statechart& sc, const RefinementScript& script) {
  ScriptResult result{sc, identity_mapping(sc), {}};
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    RefinementResult r;
    try {
      r = apply_step(result.model, script.steps[i]);
    } catch (const RefinementError& e) {
      throw RefinementError(e.detail(), i);
    } catch (const std::out_of_range& e) {
      throw RefinementError(e.what(), i);
    }
    result.mapping = compose(result.mapping, r.mapping);
    result.model = std::move(r.model);
    result.steps.push_back({i, r.rule, std::move(r.constraints), std::move(r.created)});
  }
  return result;
}

std::string manifest_to_json(const ScriptResult& result) {
  nlohmann::ordered_json j;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : result.steps) {
    nlohmann::ordered_json step;
    step["index"] = s.index;
    step["rule"] = s.rule;
    step["constraints"] = s.constraints;
    step["created"] = s.created;
    j["steps"].push_back(std::move(step));
  }
  return j.dump(2) + "\n";
}

}  // namespace scref
