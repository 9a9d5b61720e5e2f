#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scref/mapping.hpp"
#include "scref/model.hpp"
#include "scref/script.hpp"

namespace scref {

/// A rule could not be applied. `step()` is set when raised by apply_script.
class RefinementError : public std::runtime_error {
 public:
  explicit RefinementError(const std::string& message, std::optional<std::size_t> step = {});

  std::optional<std::size_t> step() const { return step_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::optional<std::size_t> step_;
};

/// Output of one rule application, merged with the identity on everything
/// the rule did not touch.
struct RefinementResult {
  Statechart model;
  RefinementMapping mapping;  // model -> input
  std::string rule;
  std::vector<std::string> constraints;  // constraint ids the rule obliges
  std::vector<ElementId> created;        // new states and transitions
  std::vector<ElementId> neighbors;      // pre-existing elements adjacent to the change
};

RefinementResult refine_basic(const Statechart& sc, const ElementId& state, RefineTarget target,
                              const Statechart& payload,
                              const std::optional<Modifier>& modifier = std::nullopt);
RefinementResult refine_transition(const Statechart& sc, const ElementId& transition,
                                   const Statechart& inserted);
RefinementResult refine_or_to_and(const Statechart& sc, const ElementId& state,
                                  const std::string& region);
RefinementResult add_region(const Statechart& sc, const ElementId& state, const std::string& region);
RefinementResult history_to_deep(const Statechart& sc, const ElementId& state);
RefinementResult set_modifier(const Statechart& sc, const ElementId& element,
                              const Modifier& modifier);
RefinementResult identity_refinement(const Statechart& sc);

RefinementResult apply_step(const Statechart& sc, const RefinementStep& step);

struct StepRecord {
  std::size_t index = 0;
  std::string rule;
  std::vector<std::string> constraints;
  std::vector<ElementId> created;
};

struct ScriptResult {
  Statechart model;
  RefinementMapping mapping;  // final model -> initial model
  std::vector<StepRecord> steps;
};

/// Applies the steps in order and composes their mappings. A failing step
/// raises RefinementError carrying its index.
ScriptResult apply_script(const Statechart& sc, const RefinementScript& script);

/// {"steps": [{"index", "rule", "constraints", "created"}]}
std::string manifest_to_json(const ScriptResult& result);

}  // namespace scref
