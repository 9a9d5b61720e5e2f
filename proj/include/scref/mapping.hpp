#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scref/model.hpp"

namespace scref {

enum class ElementRole { State, Transition };

/// One pair of the refinement relation, keyed by the refined element.
struct MappingEntry {
  ElementId original;
  ElementRole refined_role = ElementRole::State;
  ElementRole original_role = ElementRole::State;
  /// Rule that created the refined element ("R1".."R7"), or "virtual" for
  /// elements added freely inside a virtual scope. Empty means pre-existing.
  std::optional<std::string> created_by;

  friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

/// The refinement relation: every refined element maps to one original.
struct RefinementMapping {
  std::map<ElementId, MappingEntry> pairs;

  const MappingEntry* find(const ElementId& refined) const;
  /// Original id -> refined ids mapped onto it, in id order.
  std::map<ElementId, std::vector<ElementId>> groups() const;

  friend bool operator==(const RefinementMapping&, const RefinementMapping&) = default;
};

std::optional<ElementRole> role_of(const Statechart& sc, const ElementId& id);

/// Every state (except the root) and transition mapped onto itself.
RefinementMapping identity_mapping(const Statechart& sc);

/// Composition of `first` (M0 -> M1) with `second` (M1 -> M2): the result
/// relates M2 to M0. A refined element of `second` whose intermediate image
/// is missing from `first` is dropped.
RefinementMapping compose(const RefinementMapping& first, const RefinementMapping& second);

}  // namespace scref
