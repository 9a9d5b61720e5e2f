#include "scref/relation.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

#include "scref/constraints.hpp"
#include "scref/modifiers.hpp"

namespace scref {

namespace {

std::string list(const std::vector<ElementId>& ids, std::size_t limit = 8) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::vector<ElementId> states_top_down(const Statechart& sc) {
  std::vector<ElementId> order;
  std::deque<ElementId> queue{sc.root};
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    order.push_back(id);
    for (const auto& c : sc.state(id).children) queue.push_back(c);
  }
  return order;
}

}  // namespace

RefinementMapping complete_mapping(const Statechart& original, const Statechart& refined,
                                   const RefinementMapping& mapping) {
  RefinementMapping out = mapping;
  Hierarchy rh(refined);
  auto inherit = [&](const ElementId& id, ElementRole role, const ElementId& scope) {
    if (scope == refined.root || !effective_modifier(refined, rh, scope).is_virtual) return;
    const auto* e = out.find(scope);
    if (!e) return;
    out.pairs[id] = MappingEntry{e->original, role, e->original_role, "virtual"};
  };
  for (const auto& id : states_top_down(refined)) {
    if (id == refined.root || out.find(id)) continue;
    if (original.find_state(id) && id != original.root) {
      out.pairs[id] = MappingEntry{id, ElementRole::State, ElementRole::State, std::nullopt};
      continue;
    }
    inherit(id, ElementRole::State, rh.parent(id).value_or(refined.root));
  }
  for (const auto& [id, t] : refined.transitions) {
    if (out.find(id)) continue;
    if (original.find_transition(id)) {
      out.pairs[id] =
          MappingEntry{id, ElementRole::Transition, ElementRole::Transition, std::nullopt};
      continue;
    }
    inherit(id, ElementRole::Transition, rh.container_of(t));
  }
  return out;
}

ConstraintResult check_inverse_surjection(const Statechart& original, const Statechart& refined,
                                          const RefinementMapping& mapping) {
  std::vector<ElementId> unmapped, dangling, lost;
  auto check_refined = [&](const ElementId& id) {
    const auto* e = mapping.find(id);
    if (!e) {
      unmapped.push_back(id);
      return;
    }
    auto role = role_of(original, e->original);
    if (!role || e->original == original.root || *role != e->original_role) dangling.push_back(id);
  };
  for (const auto& [id, s] : refined.states)
    if (id != refined.root) check_refined(id);
  for (const auto& [id, t] : refined.transitions) check_refined(id);
  for (const auto& [id, e] : mapping.pairs)
    if (!refined.contains(id) || id == refined.root) dangling.push_back(id);

  auto groups = mapping.groups();
  auto reached = [&](const ElementId& id) {
    auto it = groups.find(id);
    if (it == groups.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const ElementId& r) { return refined.contains(r); });
  };
  for (const auto& [id, s] : original.states)
    if (id != original.root && !reached(id)) lost.push_back(id);
  for (const auto& [id, t] : original.transitions)
    if (!reached(id)) lost.push_back(id);

  if (unmapped.empty() && dangling.empty() && lost.empty()) return ConstraintResult::pass({});
  std::vector<ElementId> elements;
  std::string msg;
  auto add = [&](const std::vector<ElementId>& ids, const std::string& what) {
    if (ids.empty()) return;
    elements.insert(elements.end(), ids.begin(), ids.end());
    msg += (msg.empty() ? "" : "; ") + what + ": " + list(ids);
  };
  add(unmapped, "refined element without an original");
  add(dangling, "mapping to an unknown element");
  add(lost, "original element without a refined image");
  return ConstraintResult::fail(elements, msg);
}

ConstraintResult check_event_var_inclusion(const Statechart& original, const Statechart& refined) {
  std::vector<ElementId> missing;
  for (const auto& e : original.events)
    if (!refined.events.count(e)) missing.push_back("event " + e);
  for (const auto& [v, type] : original.variables)
    if (!refined.variables.count(v)) missing.push_back("variable " + v);
  if (missing.empty()) return ConstraintResult::pass({});
  return ConstraintResult::fail(missing, "missing from the refined model: " + list(missing));
}

std::vector<ConstraintResult> check_guard_inclusion(const Statechart& original,
                                                    const Statechart& refined,
                                                    const RefinementMapping& mapping) {
  ConstraintContext ctx(original, refined, mapping);
  std::map<ElementId, std::set<ElementId>> source_images;
  std::vector<ConstraintResult> out;
  for (const auto& [id, t] : refined.transitions) {
    const auto* e = mapping.find(id);
    const Transition* ot = e ? original.find_transition(e->original) : nullptr;
    bool first = false;
    if (ot) {
      auto it = source_images.find(ot->source);
      if (it == source_images.end())
        it = source_images.emplace(ot->source, ctx.image_closure(ot->source)).first;
      first = it->second.count(t.source) > 0;
    }
    if (first) {
      if (guard_extends(ot->guard, t.guard))
        out.push_back(ConstraintResult::pass({id}));
      else
        out.push_back(ConstraintResult::fail(
            {id}, "guard '" + t.guard.to_string() + "' does not extend '" + ot->guard.to_string() + "'"));
    } else if (t.guard.has_disjunction()) {
      out.push_back(ConstraintResult::fail({id}, "guard '" + t.guard.to_string() + "' contains a disjunction"));
    } else {
      out.push_back(ConstraintResult::pass({id}));
    }
  }
  return out;
}

std::vector<ConstraintResult> check_modifier_table(const Statechart& original,
                                                   const Statechart& refined,
                                                   const RefinementMapping& mapping) {
  Hierarchy oh(original), rh(refined);
  std::vector<ConstraintResult> out;
  for (const auto& [id, e] : mapping.pairs) {
    if (!refined.contains(id) || !original.contains(e.original) || id == refined.root) continue;
    bool same_id = id == e.original;
    bool pre_existing = !e.created_by && e.refined_role == e.original_role;
    if (!same_id && !pre_existing) continue;
    auto from = effective_modifier(original, oh, e.original);
    auto to = effective_modifier(refined, rh, id);
    auto r = check_modifier_refinement(
        from, to, e.created_by ? Origin::ToolInitiated : Origin::UserInitiated);
    r.elements = {id};
    out.push_back(std::move(r));
  }
  return out;
}

ConfigurationRelation lift_mapping(const Statechart& original, const FlatStatechart& original_flat,
                                   const Statechart& refined, const FlatStatechart& refined_flat,
                                   const RefinementMapping& mapping) {
  Hierarchy oh(original), rh(refined);
  std::map<ElementId, std::set<ElementId>> chains;
  auto chain_of = [&](const ElementId& leaf) -> const std::set<ElementId>& {
    auto it = chains.find(leaf);
    if (it != chains.end()) return it->second;
    std::set<ElementId> chain;
    std::vector<ElementId> up{leaf};
    auto anc = rh.ancestors(leaf);
    up.insert(up.end(), anc.begin(), anc.end());
    for (const auto& x : up) {
      if (x == refined.root) continue;
      const auto* e = mapping.find(x);
      if (!e || e->original == original.root || !original.find_state(e->original)) continue;
      chain.insert(e->original);
      for (const auto& a : oh.ancestors(e->original))
        if (a != original.root) chain.insert(a);
    }
    return chains.emplace(leaf, std::move(chain)).first->second;
  };

  std::vector<std::set<ElementId>> closed;
  for (const auto& c : original_flat.states) {
    std::set<ElementId> cl(c.begin(), c.end());
    for (const auto& m : c)
      for (const auto& a : oh.ancestors(m))
        if (a != original.root) cl.insert(a);
    closed.push_back(std::move(cl));
  }

  ConfigurationRelation rel;
  rel.originals_of.resize(refined_flat.states.size());
  for (std::size_t i = 0; i < refined_flat.states.size(); ++i) {
    std::set<ElementId> covered;
    std::vector<const std::set<ElementId>*> member_chains;
    for (const auto& m : refined_flat.states[i]) {
      const auto& ch = chain_of(m);
      covered.insert(ch.begin(), ch.end());
      member_chains.push_back(&ch);
    }
    for (std::size_t j = 0; j < original_flat.states.size(); ++j) {
      const auto& oc = original_flat.states[j];
      bool leaves = std::all_of(oc.begin(), oc.end(),
                                [&](const ElementId& l) { return covered.count(l) > 0; });
      if (!leaves) continue;
      bool meets = std::all_of(member_chains.begin(), member_chains.end(), [&](const auto* ch) {
        return std::any_of(ch->begin(), ch->end(),
                           [&](const ElementId& x) { return closed[j].count(x) > 0; });
      });
      if (meets) rel.originals_of[i].push_back(j);
    }
  }
  return rel;
}

std::vector<ConstraintResult> check_structural_inclusion(const Lts& original, const Lts& refined,
                                                         const ConfigurationRelation& relation,
                                                         std::size_t budget) {
  std::vector<std::vector<std::size_t>> refined_of(original.size());
  for (std::size_t r = 0; r < relation.originals_of.size(); ++r)
    for (auto o : relation.originals_of[r]) refined_of.at(o).push_back(r);

  std::map<std::size_t, std::vector<bool>> accept_cache;
  auto accept_for = [&](std::size_t o) -> const std::vector<bool>& {
    auto it = accept_cache.find(o);
    if (it != accept_cache.end()) return it->second;
    std::vector<bool> accept(refined.size(), false);
    for (auto r : refined_of[o]) accept[r] = true;
    return accept_cache.emplace(o, std::move(accept)).first->second;
  };

  std::vector<ConstraintResult> out;
  for (const auto& e : original.edges()) {
    std::string edge = original.node_label(e.source) + " -- " +
                       edge_label(e.trigger, e.guard, e.outputs) + " --> " +
                       original.node_label(e.target);
    std::vector<ElementId> elements{original.node_label(e.source), original.node_label(e.target)};
    const auto& accept = accept_for(e.target);
    std::vector<ElementId> failing;
    for (auto r : refined_of[e.source])
      if (!refined.has_refining_path(r, e.trigger, e.outputs, accept, budget))
        failing.push_back(refined.node_label(r));
    if (failing.empty())
      out.push_back(ConstraintResult::pass(elements, edge));
    else
      out.push_back(ConstraintResult::fail(elements, edge + " has no refining path from " + list(failing)));
  }
  return out;
}

bool RefinementReport::has(Verdict v) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const ReportEntry& e) { return e.result.verdict == v; });
}

std::vector<std::string> RefinementReport::checks_with(Verdict v) const {
  std::set<std::string> ids;
  for (const auto& e : entries)
    if (e.result.verdict == v) ids.insert(e.check);
  return {ids.begin(), ids.end()};
}

RefinementReport check_refinement(const Statechart& original, const Statechart& refined,
                                  const RefinementMapping& mapping, const CheckOptions& options) {
  RefinementReport report;
  auto add = [&](const std::string& check, ConstraintResult r) {
    if (r.verdict != Verdict::None) report.entries.push_back({check, std::move(r)});
  };
  auto finish = [&] {
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const ReportEntry& a, const ReportEntry& b) {
                       return std::tie(a.check, a.result.elements) <
                              std::tie(b.check, b.result.elements);
                     });
    report.valid = !report.has(Verdict::Fail);
    return report;
  };

  for (const auto* sc : {&original, &refined}) {
    std::string which = sc == &original ? "original" : "refined";
    for (const auto& d : check_well_formed(*sc))
      add("model/well-formed", ConstraintResult::fail({d.element}, which + ": " + d.code + ": " + d.message));
  }
  if (report.has(Verdict::Fail)) return finish();

  RefinementMapping full = complete_mapping(original, refined, mapping);
  ConstraintContext ctx(original, refined, full);

  std::vector<std::function<void()>> families = {
      [&] { add("refinement/inverse-surjection", check_inverse_surjection(original, refined, full)); },
      [&] { add("refinement/event-var-inclusion", check_event_var_inclusion(original, refined)); },
      [&] {
        for (auto& r : check_guard_inclusion(original, refined, full))
          add("refinement/guard-inclusion", std::move(r));
      },
      [&] {
        for (auto& r : check_modifier_table(original, refined, full)) add("modifier/table", std::move(r));
        for (auto& r : check_virtual_placement(original, refined, full))
          add("modifier/virtual-placement", std::move(r));
        for (auto& r : check_locked(ctx)) add("modifier/locked", std::move(r));
      },
      [&] {
        for (const auto& c : rule_constraints())
          for (const auto& g : ctx.groups()) add(c.id, c.evaluate(g, ctx));
      },
      [&] {
        auto r = sc_fully_defined(refined);
        if (options.require_complete && r.verdict == Verdict::Warn) r.verdict = Verdict::Fail;
        add("sc/fully-defined", std::move(r));
      },
      [&] {
        FlattenOptions fo{options.max_configurations};
        auto of = flatten(original, fo);
        auto rf = flatten(refined, fo);
        Lts ol(of), rl(rf);
        auto rel = lift_mapping(original, of, refined, rf, full);
        for (auto& r : check_structural_inclusion(ol, rl, rel, options.path_budget))
          add("refinement/structural-inclusion", std::move(r));
      },
  };
  for (const auto& family : families) {
    family();
    if (options.fail_fast && report.has(Verdict::Fail)) break;
  }
  return finish();
}

std::string report_to_json(const RefinementReport& report) {
  nlohmann::ordered_json j;
  j["overall"] = report.valid ? "Valid" : "Invalid";
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json entry;
    entry["check"] = e.check;
    entry["elements"] = e.result.elements;
    entry["result"] = std::string(to_string(e.result.verdict));
    entry["message"] = e.result.message;
    j["entries"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const RefinementReport& report) {
  std::string out;
  std::size_t passed = 0, failed = 0, warned = 0;
  for (const auto& e : report.entries) {
    switch (e.result.verdict) {
      case Verdict::Pass: ++passed; continue;
      case Verdict::Fail: ++failed; break;
      case Verdict::Warn: ++warned; break;
      case Verdict::None: continue;
    }
    out += std::string(to_string(e.result.verdict)) + "  " + e.check;
    if (!e.result.elements.empty()) out += "  [" + list(e.result.elements) + "]";
    if (!e.result.message.empty()) out += "  " + e.result.message;
    out += "\n";
  }
  out += std::string("overall: ") + (report.valid ? "Valid" : "Invalid") + " (" +
         std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " +
         std::to_string(warned) + " warnings)\n";
  return out;
}

}  // namespace scref
