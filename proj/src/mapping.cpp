#include "scref/mapping.hpp"
#include "scref/script.hpp"

namespace scref {

const MappingEntry* RefinementMapping::find(const ElementId& refined) const {
  auto it = pairs.find(refined);
  return it == pairs.end() ? nullptr : &it->second;
}

std::map<ElementId, std::vector<ElementId>> RefinementMapping::groups() const {
  std::map<ElementId, std::vector<ElementId>> out;
  for (const auto& [refined, entry] : pairs) out[entry.original].push_back(refined);
  return out;
}

std::optional<ElementRole> role_of(const Statechart& sc, const ElementId& id) {
  if (id != sc.root && sc.find_state(id)) return ElementRole::State;
  if (sc.find_transition(id)) return ElementRole::Transition;
  return std::nullopt;
}

RefinementMapping identity_mapping(const Statechart& sc) {
  RefinementMapping m;
  for (const auto& [id, s] : sc.states)
    if (id != sc.root) m.pairs[id] = {id, ElementRole::State, ElementRole::State, std::nullopt};
  for (const auto& [id, t] : sc.transitions)
    m.pairs[id] = {id, ElementRole::Transition, ElementRole::Transition, std::nullopt};
  return m;
}

RefinementMapping compose(const RefinementMapping& first, const RefinementMapping& second) {
  RefinementMapping out;
  for (const auto& [refined, mid] : second.pairs) {
    const auto* base = first.find(mid.original);
    if (!base) continue;
    MappingEntry e;
    e.original = base->original;
    e.refined_role = mid.refined_role;
    e.original_role = base->original_role;
    e.created_by = mid.created_by ? mid.created_by : base->created_by;
    out.pairs.emplace(refined, std::move(e));
  }
  return out;
}

std::string_view to_string(RefineTarget target) {
  switch (target) {
    case RefineTarget::Basic: return "basic";
    case RefineTarget::Or: return "or";
    case RefineTarget::And: return "and";
  }
  return "?";
}

std::string rule_of(const RefinementStep& step) {
  struct Visitor {
    std::string operator()(const RefineBasic&) const { return "R1"; }
    std::string operator()(const RefineTransition&) const { return "R2"; }
    std::string operator()(const OrToAnd&) const { return "R3"; }
    std::string operator()(const AddRegion&) const { return "R4"; }
    std::string operator()(const HistoryToDeep&) const { return "R7"; }
    std::string operator()(const SetModifier&) const { return "modifier"; }
    std::string operator()(const Identity&) const { return "identity"; }
  };
  return std::visit(Visitor{}, step);
}

}  // namespace scref
