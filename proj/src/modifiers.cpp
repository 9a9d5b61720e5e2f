#include "scref/modifiers.hpp"

#include <algorithm>

namespace scref {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Warn: return "WARN";
    case Verdict::None: return "NONE";
  }
  return "?";
}

ConstraintResult ConstraintResult::pass(std::vector<ElementId> elements, std::string message) {
  return {Verdict::Pass, std::move(message), std::move(elements)};
}
ConstraintResult ConstraintResult::fail(std::vector<ElementId> elements, std::string message) {
  return {Verdict::Fail, std::move(message), std::move(elements)};
}
ConstraintResult ConstraintResult::warn(std::vector<ElementId> elements, std::string message) {
  return {Verdict::Warn, std::move(message), std::move(elements)};
}
ConstraintResult ConstraintResult::none(std::vector<ElementId> elements) {
  return {Verdict::None, {}, std::move(elements)};
}

ModifierClass classify(const Modifier& m) {
  switch (m.base) {
    case BaseModifier::Abstract:
      return m.is_virtual ? ModifierClass::AbstractVirtual : ModifierClass::Abstract;
    case BaseModifier::Standard:
      return m.is_virtual ? ModifierClass::StandardVirtual : ModifierClass::Standard;
    case BaseModifier::Locked:
      return ModifierClass::Locked;
  }
  return ModifierClass::Standard;
}

std::string_view to_string(ModifierClass c) {
  switch (c) {
    case ModifierClass::Abstract: return "abstract";
    case ModifierClass::AbstractVirtual: return "abstract, virtual";
    case ModifierClass::Standard: return "standard";
    case ModifierClass::StandardVirtual: return "standard, virtual";
    case ModifierClass::Locked: return "locked";
  }
  return "?";
}

namespace {
constexpr auto Y = Legality::Yes;
constexpr auto N = Legality::No;
constexpr auto T = Legality::ByTool;
}  // namespace

// Rows: refined class. Columns: original class. Both in ModifierClass order.
const std::array<std::array<Legality, 5>, 5> kModifierTable = {{
    //  A  AV  S  SV  L
    {{Y, Y, N, N, N}},  // -> abstract
    {{T, Y, N, N, N}},  // -> abstract, virtual
    {{Y, Y, Y, Y, N}},  // -> standard
    {{T, Y, T, Y, N}},  // -> standard, virtual
    {{Y, Y, Y, Y, Y}},  // -> locked
}};

Legality modifier_legality(ModifierClass original, ModifierClass refined) {
  return kModifierTable[static_cast<std::size_t>(refined)][static_cast<std::size_t>(original)];
}

Modifier effective_modifier(const Statechart& sc, const ElementId& id) {
  return effective_modifier(sc, Hierarchy(sc), id);
}

namespace {

// Folds explicit modifiers top-down along `chain` (outermost first).
Modifier fold_chain(const Statechart& sc, const std::vector<ElementId>& chain) {
  Modifier cur;
  bool locked_above = false;
  for (const auto& id : chain) {
    const State& s = sc.state(id);
    if (s.modifier) {
      cur = *s.modifier;
      if (locked_above && cur.base != BaseModifier::Locked) cur.is_virtual = false;
    } else if (s.kind == StateKind::HistoryDeep) {
      cur = Modifier{BaseModifier::Locked, false};
    }
    if (cur.base == BaseModifier::Locked) locked_above = true;
  }
  return cur;
}

std::vector<ElementId> chain_to(const Statechart& sc, const Hierarchy& h, const ElementId& id) {
  auto up = h.ancestors(id);
  std::vector<ElementId> chain;
  for (auto it = up.rbegin(); it != up.rend(); ++it)
    if (*it != sc.root) chain.push_back(*it);
  if (id != sc.root) chain.push_back(id);
  return chain;
}

}  // namespace

Modifier effective_modifier(const Statechart& sc, const Hierarchy& h, const ElementId& id) {
  if (sc.find_state(id)) return fold_chain(sc, chain_to(sc, h, id));
  const Transition& t = sc.transition(id);
  auto container = h.container_of(t);
  Modifier m = t.modifier ? *t.modifier : fold_chain(sc, chain_to(sc, h, container));
  m.is_virtual = false;
  return m;
}

ConstraintResult check_modifier_refinement(const Modifier& original, const Modifier& refined,
                                           Origin origin) {
  auto from = classify(original);
  auto to = classify(refined);
  auto legality = modifier_legality(from, to);
  std::string what = "<<" + std::string(to_string(from)) + ">> -> <<" + std::string(to_string(to)) + ">>";
  switch (legality) {
    case Legality::Yes:
      return ConstraintResult::pass({}, what);
    case Legality::ByTool:
      if (origin == Origin::ToolInitiated) return ConstraintResult::pass({}, what + " (by tool)");
      return ConstraintResult::fail({}, what + " may only be applied by the refiner");
    case Legality::No:
      break;
  }
  return ConstraintResult::fail({}, what + " is not a permitted modifier refinement");
}

std::vector<ConstraintResult> check_virtual_placement(const Statechart& original,
                                                      const Statechart& refined,
                                                      const RefinementMapping& mapping) {
  std::vector<ConstraintResult> out;
  Hierarchy oh(original);
  Hierarchy rh(refined);
  for (const auto& [id, s] : refined.states) {
    if (!s.modifier || !s.modifier->is_virtual) continue;
    // inside a locked ancestor the annotation grants nothing
    if (!effective_modifier(refined, rh, id).is_virtual) continue;
    const auto* entry = mapping.find(id);
    if (!entry) {
      out.push_back(ConstraintResult::fail({id}, "virtual element has no original"));
      continue;
    }
    const State* orig = original.find_state(entry->original);
    bool created = entry->created_by && entry->original != id;
    bool was_virtual = orig && effective_modifier(original, oh, orig->id).is_virtual;
    bool region = s.kind == StateKind::Region;
    // an And-state here is an Or-refinement followed by an or-to-and step
    bool basic_to_or = orig && orig->kind == StateKind::Basic &&
                       (s.kind == StateKind::Or || s.kind == StateKind::And);
    if (was_virtual) {
      out.push_back(ConstraintResult::pass({id}, "original was virtual"));
    } else if (created) {
      out.push_back(ConstraintResult::pass({id}, "newly created element"));
    } else if (region) {
      out.push_back(ConstraintResult::pass({id}, "orthogonal component"));
    } else if (basic_to_or) {
      out.push_back(ConstraintResult::pass({id}, "basic state refined into an Or-state"));
    } else {
      out.push_back(ConstraintResult::fail(
          {id}, "virtual is only permitted on refinements of virtual states, new elements, "
                "orthogonal components and basic states refined into Or-states"));
    }
  }
  return out;
}

}  // namespace scref
