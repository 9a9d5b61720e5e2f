#pragma once

#include <array>
#include <vector>

#include "scref/mapping.hpp"
#include "scref/model.hpp"
#include "scref/result.hpp"

namespace scref {

enum class Origin { UserInitiated, ToolInitiated };

/// The five modifier combinations that can annotate an element.
enum class ModifierClass { Abstract, AbstractVirtual, Standard, StandardVirtual, Locked };

enum class Legality { Yes, No, ByTool };

ModifierClass classify(const Modifier& m);
std::string_view to_string(ModifierClass c);

/// Permitted modifier refinements, indexed [refined][original].
extern const std::array<std::array<Legality, 5>, 5> kModifierTable;

Legality modifier_legality(ModifierClass original, ModifierClass refined);

/// Explicit modifier, else the nearest ancestor's, else standard. An
/// explicit override inside a locked ancestor loses `virtual`; deep history
/// states are locked unless annotated; transitions are never virtual.
Modifier effective_modifier(const Statechart& sc, const ElementId& id);
Modifier effective_modifier(const Statechart& sc, const Hierarchy& h, const ElementId& id);

ConstraintResult check_modifier_refinement(const Modifier& original, const Modifier& refined,
                                           Origin origin);

/// Every refined element that explicitly carries an effective `virtual` must be one of:
/// the image of a virtual original, a newly created element, a region, or
/// a basic state refined into an Or-state (or further into an And-state).
std::vector<ConstraintResult> check_virtual_placement(const Statechart& original,
                                                      const Statechart& refined,
                                                      const RefinementMapping& mapping);

}  // namespace scref
