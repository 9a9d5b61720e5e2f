#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scref/model.hpp"

namespace scref {

enum class RefineTarget { Basic, Or, And };

std::string_view to_string(RefineTarget target);

// Payloads are statechart fragments. Their ids are local names that the
// refiner replaces with generated ids; transition endpoints may also name
// existing elements of the model being refined.

struct RefineBasic {
  ElementId state;
  RefineTarget target = RefineTarget::Basic;
  std::optional<Modifier> modifier;
  Statechart payload = Statechart::empty("payload");

  friend bool operator==(const RefineBasic&, const RefineBasic&) = default;
};

struct RefineTransition {
  ElementId transition;
  Statechart inserted = Statechart::empty("payload");

  friend bool operator==(const RefineTransition&, const RefineTransition&) = default;
};

struct OrToAnd {
  ElementId state;
  std::string region;

  friend bool operator==(const OrToAnd&, const OrToAnd&) = default;
};

struct AddRegion {
  ElementId state;
  std::string region;

  friend bool operator==(const AddRegion&, const AddRegion&) = default;
};

struct HistoryToDeep {
  ElementId state;

  friend bool operator==(const HistoryToDeep&, const HistoryToDeep&) = default;
};

struct SetModifier {
  ElementId element;
  Modifier modifier;

  friend bool operator==(const SetModifier&, const SetModifier&) = default;
};

struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};

using RefinementStep = std::variant<RefineBasic, RefineTransition, OrToAnd, AddRegion,
                                    HistoryToDeep, SetModifier, Identity>;

struct RefinementScript {
  std::vector<RefinementStep> steps;

  friend bool operator==(const RefinementScript&, const RefinementScript&) = default;
};

/// Short name of the rule a step applies ("R1", "R2", ...; "identity").
std::string rule_of(const RefinementStep& step);

}  // namespace scref
