#include "scref/constraints.hpp"

#include <algorithm>

#include "scref/modifiers.hpp"

namespace scref {

ConstraintContext::ConstraintContext(const Statechart& original, const Statechart& refined,
                                     const RefinementMapping& mapping)
    : orig_(&original), ref_(&refined), mapping_(&mapping), oh_(original), rh_(refined) {
  auto by_original = mapping.groups();
  auto add = [&](const ElementId& id) {
    group_index_[id] = groups_.size();
    auto it = by_original.find(id);
    groups_.push_back({id, it == by_original.end() ? std::vector<ElementId>{} : it->second});
  };
  std::set<ElementId> ids;
  for (const auto& [id, s] : original.states)
    if (id != original.root) ids.insert(id);
  for (const auto& [id, t] : original.transitions) ids.insert(id);
  for (const auto& id : ids) add(id);
}

const EntryGroup* ConstraintContext::group(const ElementId& original) const {
  auto it = group_index_.find(original);
  return it == group_index_.end() ? nullptr : &groups_[it->second];
}

std::vector<ElementId> ConstraintContext::image(const ElementId& s) const {
  std::vector<ElementId> out;
  if (const auto* g = group(s))
    for (const auto& r : g->refined)
      if (ref_->find_state(r)) out.push_back(r);
  return out;
}

std::set<ElementId> ConstraintContext::image_closure(const ElementId& s) const {
  std::set<ElementId> out;
  for (const auto& r : image(s)) {
    out.insert(r);
    for (const auto& d : rh_.descendants(r)) out.insert(d);
  }
  return out;
}

std::optional<ElementId> ConstraintContext::principal(const ElementId& s) const {
  auto img = image(s);
  if (img.empty()) return std::nullopt;
  if (std::find(img.begin(), img.end(), s) != img.end()) return s;
  return img.front();
}

std::vector<const Transition*> ConstraintContext::transitions_of(const EntryGroup& g) const {
  std::vector<const Transition*> out;
  for (const auto& r : g.refined)
    if (const auto* t = ref_->find_transition(r)) out.push_back(t);
  return out;
}

bool ConstraintContext::refined_virtual(const ElementId& id) const {
  if (const auto* t = ref_->find_transition(id))
    return effective_modifier(*ref_, rh_, rh_.container_of(*t)).is_virtual;
  return effective_modifier(*ref_, rh_, id).is_virtual;
}

bool ConstraintContext::original_locked(const ElementId& id) const {
  return effective_modifier(*orig_, oh_, id).base == BaseModifier::Locked;
}

namespace {

std::vector<ElementId> ids_of(const std::vector<const Transition*>& ts) {
  std::vector<ElementId> out;
  for (const auto* t : ts) out.push_back(t->id);
  return out;
}

std::string list(const std::vector<ElementId>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

// Refined transitions of the group leaving the image of the original source.
std::vector<const Transition*> first_transitions(const Transition& orig, const EntryGroup& g,
                                                 const ConstraintContext& ctx) {
  auto src = ctx.image_closure(orig.source);
  std::vector<const Transition*> out;
  for (const auto* t : ctx.transitions_of(g))
    if (src.count(t->source)) out.push_back(t);
  return out;
}

std::vector<const Transition*> final_transitions(const Transition& orig, const EntryGroup& g,
                                                 const ConstraintContext& ctx) {
  auto tgt = ctx.image_closure(orig.target);
  std::vector<const Transition*> out;
  for (const auto* t : ctx.transitions_of(g))
    if (tgt.count(t->target)) out.push_back(t);
  return out;
}

// Refined transitions incident to `s`'s principal image that are not images
// of an original transition incident to `s`.
std::vector<ElementId> added_transitions(const ElementId& s, const ConstraintContext& ctx) {
  std::vector<ElementId> out;
  auto p = ctx.principal(s);
  if (!p) return out;
  for (const auto& [id, t] : ctx.refined().transitions) {
    if (t.source != *p && t.target != *p) continue;
    const auto* entry = ctx.mapping().find(id);
    const Transition* ot = entry ? ctx.original().find_transition(entry->original) : nullptr;
    if (ot && (ot->source == s || ot->target == s)) continue;
    out.push_back(id);
  }
  return out;
}

}  // namespace

ConstraintResult exclusive_guards(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_transition(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  auto ts = ctx.transitions_of(g);
  if (ts.empty()) return ConstraintResult::none({g.original});
  auto src = ctx.image_closure(orig->source);
  auto tgt = ctx.image_closure(orig->target);
  std::vector<ElementId> unpaired;
  // A triggerless original is itself an intermediate step of some chain, so
  // only guards it already had are exempt at the chain ends.
  bool intermediate = !orig->trigger;
  // Transitions wholly inside an inserted state belong to that state's own
  // behaviour, not to the chain.
  const auto& rh = ctx.refined_hierarchy();
  auto chain_states = ctx.image(g.original);
  auto internal = [&](const Transition* t) {
    return std::any_of(chain_states.begin(), chain_states.end(), [&](const ElementId& s) {
      return rh.is_ancestor(s, t->source) && rh.is_ancestor(s, t->target);
    });
  };
  for (const auto* t : ts) {
    if (t->guard.is_true() || internal(t)) continue;
    bool at_end = src.count(t->source) || tgt.count(t->target);
    if (at_end && (!intermediate || t->guard == orig->guard)) continue;
    bool paired = std::any_of(ts.begin(), ts.end(), [&](const Transition* u) {
      return u != t && u->source == t->source && is_literal_negation(t->guard, u->guard);
    });
    if (!paired) unpaired.push_back(t->id);
  }
  if (!unpaired.empty())
    return ConstraintResult::fail(
        unpaired, "guarded intermediate transition without a negated alternative: " + list(unpaired));
  return ConstraintResult::pass({g.original});
}

ConstraintResult minimal_guard(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_transition(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  auto first = first_transitions(*orig, g, ctx);
  if (first.empty()) return ConstraintResult::none({g.original});
  std::vector<ElementId> bad;
  for (const auto* t : first)
    if (!guard_extends(orig->guard, t->guard)) bad.push_back(t->id);
  if (!bad.empty())
    return ConstraintResult::fail(bad, "guard does not extend '" + orig->guard.to_string() +
                                           "' conjunctively: " + list(bad));
  return ConstraintResult::pass({g.original});
}

ConstraintResult original_broadcast(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_transition(g.original);
  if (!orig || ctx.transitions_of(g).empty()) return ConstraintResult::none({g.original});
  auto last = final_transitions(*orig, g, ctx);
  if (last.empty())
    return ConstraintResult::fail({g.original}, "no refined transition enters the target");
  std::vector<ElementId> bad;
  for (const auto* t : last)
    if (t->outputs != orig->outputs) bad.push_back(t->id);
  if (!bad.empty())
    return ConstraintResult::fail(bad, "final transition changes the original broadcast: " + list(bad));
  return ConstraintResult::pass({g.original});
}

ConstraintResult original_events(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_transition(g.original);
  if (!orig || ctx.transitions_of(g).empty()) return ConstraintResult::none({g.original});
  auto first = first_transitions(*orig, g, ctx);
  if (first.empty())
    return ConstraintResult::fail({g.original}, "no refined transition leaves the source");
  std::vector<ElementId> bad;
  for (const auto* t : first)
    if (t->trigger != orig->trigger) bad.push_back(t->id);
  if (!bad.empty())
    return ConstraintResult::fail(bad, "first transition not triggered by '" +
                                           orig->trigger.value_or("") + "': " + list(bad));
  return ConstraintResult::pass({g.original});
}

ConstraintResult reachability(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_transition(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  auto ts = ctx.transitions_of(g);
  if (ts.empty()) return ConstraintResult::none({g.original});
  const auto& rh = ctx.refined_hierarchy();
  auto goal = ctx.image_closure(orig->target);
  auto start = ctx.image(orig->source);
  std::set<ElementId> seen(start.begin(), start.end());
  std::vector<ElementId> stack(start.begin(), start.end());
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (const auto* t : ts) {
      bool from_here = t->source == x || rh.is_ancestor(t->source, x) || rh.is_ancestor(x, t->source);
      if (!from_here) continue;
      if (goal.count(t->target)) return ConstraintResult::pass({g.original});
      if (seen.insert(t->target).second) stack.push_back(t->target);
    }
  }
  return ConstraintResult::fail(ids_of(ts), "target of " + g.original +
                                                " is not reachable from its source");
}

ConstraintResult original_name(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_state(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  for (const auto& r : ctx.image(g.original))
    if (ctx.refined().state(r).name == orig->name) return ConstraintResult::pass({g.original});
  return ConstraintResult::fail({g.original}, "no refined state keeps the name '" + orig->name + "'");
}

ConstraintResult original_transitions(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_state(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  auto img = ctx.image_closure(g.original);
  std::vector<ElementId> missing;
  for (const auto& [id, ot] : ctx.original().transitions) {
    bool out = ot.source == g.original;
    bool in = ot.target == g.original;
    if (!out && !in) continue;
    const auto* tg = ctx.group(id);
    bool found = false;
    if (tg)
      for (const auto* t : ctx.transitions_of(*tg))
        if ((out && img.count(t->source)) || (in && img.count(t->target))) found = true;
    if (!found) missing.push_back(id);
  }
  if (!missing.empty())
    return ConstraintResult::fail(missing, "transition of " + g.original +
                                               " has no refined counterpart: " + list(missing));
  auto added = added_transitions(g.original, ctx);
  std::vector<ElementId> illegal;
  for (const auto& id : added)
    if (!ctx.refined_virtual(id) && !ctx.refined_virtual(*ctx.principal(g.original)))
      illegal.push_back(id);
  if (!added.empty() && ctx.original_locked(g.original)) illegal = added;
  if (!illegal.empty())
    return ConstraintResult::fail(illegal, "transition added to " + g.original +
                                               " outside a virtual scope: " + list(illegal));
  return ConstraintResult::pass({g.original});
}

ConstraintResult substate_mappings(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_state(g.original);
  if (!orig || !is_composite(orig->kind)) return ConstraintResult::none({g.original});
  auto p = ctx.principal(g.original);
  if (!p) return ConstraintResult::fail({g.original}, "composite state has no refined image");
  const auto& rh = ctx.refined_hierarchy();
  std::vector<ElementId> missing;
  for (const auto& child : orig->children) {
    auto img = ctx.image(child);
    bool inside = std::any_of(img.begin(), img.end(),
                              [&](const ElementId& r) { return rh.is_ancestor(*p, r); });
    if (!inside) missing.push_back(child);
  }
  if (!missing.empty())
    return ConstraintResult::fail(missing, "substate without an image inside " + *p + ": " +
                                               list(missing));
  return ConstraintResult::pass({g.original});
}

ConstraintResult history(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_state(g.original);
  if (!orig || (orig->kind != StateKind::HistoryShallow && orig->kind != StateKind::HistoryDeep))
    return ConstraintResult::none({g.original});
  auto p = ctx.principal(g.original);
  if (!p) return ConstraintResult::fail({g.original}, "history state has no refined image");
  auto kind = ctx.refined().state(*p).kind;
  bool ok = kind == StateKind::HistoryDeep ||
            (kind == StateKind::HistoryShallow && orig->kind == StateKind::HistoryShallow);
  if (!ok)
    return ConstraintResult::fail({g.original}, std::string(to_string(orig->kind)) + " refined into " +
                                                    std::string(to_string(kind)));
  return ConstraintResult::pass({g.original});
}

ConstraintResult pseudo_state_rules(const EntryGroup& g, const ConstraintContext& ctx) {
  const auto* orig = ctx.original().find_state(g.original);
  if (!orig) return ConstraintResult::none({g.original});
  bool pseudo = is_pseudo(orig->kind) && orig->kind != StateKind::HistoryShallow &&
                orig->kind != StateKind::HistoryDeep;
  if (!pseudo && !orig->is_default) return ConstraintResult::none({g.original});
  auto p = ctx.principal(g.original);
  if (!p) return ConstraintResult::fail({g.original}, "state has no refined image");
  const State& r = ctx.refined().state(*p);
  if (orig->is_default && !r.is_default)
    return ConstraintResult::fail({g.original}, "default state lost its default marking");
  if (!pseudo) return ConstraintResult::pass({g.original});
  if (r.kind != orig->kind)
    return ConstraintResult::fail({g.original}, std::string(to_string(orig->kind)) +
                                                    " refined into " + std::string(to_string(r.kind)));
  if (r.kind == StateKind::Final)
    for (const auto& [id, t] : ctx.refined().transitions)
      if (t.source == *p) return ConstraintResult::fail({g.original, id}, "final state gained an outgoing transition");
  auto added = added_transitions(g.original, ctx);
  if (!added.empty() && !ctx.refined_virtual(*p))
    return ConstraintResult::fail(added, "transition added to pseudo-state outside a virtual scope: " +
                                             list(added));
  return ConstraintResult::pass({g.original});
}

const std::vector<Constraint>& rule_constraints() {
  static const std::vector<Constraint> all = {
      {"R2.4/exclusive-guards", exclusive_guards},
      {"R2.2/minimal-guard", minimal_guard},
      {"R2.3/original-broadcast", original_broadcast},
      {"R2.1/original-events", original_events},
      {"R1/original-name", original_name},
      {"R1/original-transitions", original_transitions},
      {"R2/reachability", reachability},
      {"R3-R4/substate-mappings", substate_mappings},
      {"R7/history", history},
      {"R5-R6/pseudo-states", pseudo_state_rules},
  };
  return all;
}

const Constraint* find_constraint(const std::string& id) {
  for (const auto& c : rule_constraints())
    if (c.id == id) return &c;
  return nullptr;
}

ConstraintResult sc_fully_defined(const Statechart& sc) {
  Hierarchy h(sc);
  std::vector<ElementId> abstract;
  for (const auto& [id, s] : sc.states)
    if (id != sc.root && effective_modifier(sc, h, id).base == BaseModifier::Abstract)
      abstract.push_back(id);
  for (const auto& [id, t] : sc.transitions)
    if (effective_modifier(sc, h, id).base == BaseModifier::Abstract) abstract.push_back(id);
  if (!abstract.empty())
    return ConstraintResult::warn(abstract, "abstract elements remain: " + list(abstract));
  return ConstraintResult::pass({});
}

std::vector<ConstraintResult> check_locked(const ConstraintContext& ctx) {
  std::vector<ConstraintResult> out;
  for (const auto& g : ctx.groups()) {
    if (!ctx.original_locked(g.original)) continue;
    bool same = g.refined.size() == 1 && g.refined.front() == g.original;
    if (same) {
      if (const auto* s = ctx.original().find_state(g.original)) {
        const auto* r = ctx.refined().find_state(g.original);
        same = r && *r == *s;
      } else {
        const auto* r = ctx.refined().find_transition(g.original);
        same = r && *r == ctx.original().transition(g.original);
      }
    }
    if (same)
      out.push_back(ConstraintResult::pass({g.original}));
    else
      out.push_back(ConstraintResult::fail({g.original}, "locked element was not copied unchanged"));
  }
  return out;
}

}  // namespace scref
