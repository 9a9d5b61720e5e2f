#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scref/flatten.hpp"
#include "scref/mapping.hpp"
#include "scref/model.hpp"
#include "scref/result.hpp"

namespace scref {

/// Fills in pairs a mapping file may leave out: elements present in both
/// models with the same role map to themselves, and unmapped elements
/// inside a virtual scope map to that scope's original (tagged "virtual").
RefinementMapping complete_mapping(const Statechart& original, const Statechart& refined,
                                   const RefinementMapping& mapping);

ConstraintResult check_inverse_surjection(const Statechart& original, const Statechart& refined,
                                          const RefinementMapping& mapping);

ConstraintResult check_event_var_inclusion(const Statechart& original, const Statechart& refined);

/// One result per refined transition.
std::vector<ConstraintResult> check_guard_inclusion(const Statechart& original,
                                                    const Statechart& refined,
                                                    const RefinementMapping& mapping);

/// Modifier legality for every pair whose refined element keeps its
/// original's id or was not created by a rule; rule-created pairs are
/// tool-initiated.
std::vector<ConstraintResult> check_modifier_table(const Statechart& original,
                                                   const Statechart& refined,
                                                   const RefinementMapping& mapping);

/// Refined configuration index -> original configuration indices it maps to.
struct ConfigurationRelation {
  std::vector<std::vector<std::size_t>> originals_of;
};

/// A refined configuration maps to an original one when every leaf of the
/// original is covered by the members' original ancestor chains and every
/// member's chain meets the original configuration.
ConfigurationRelation lift_mapping(const Statechart& original, const FlatStatechart& original_flat,
                                   const Statechart& refined, const FlatStatechart& refined_flat,
                                   const RefinementMapping& mapping);

inline constexpr std::size_t kDefaultPathBudget = 100000;

/// One result per original edge. Guards are not compared.
std::vector<ConstraintResult> check_structural_inclusion(const Lts& original, const Lts& refined,
                                                         const ConfigurationRelation& relation,
                                                         std::size_t budget = kDefaultPathBudget);

struct CheckOptions {
  bool fail_fast = false;
  bool require_complete = false;
  std::size_t max_configurations = 4096;
  std::size_t path_budget = kDefaultPathBudget;
};

struct ReportEntry {
  std::string check;
  ConstraintResult result;
};

struct RefinementReport {
  bool valid = true;
  std::vector<ReportEntry> entries;  // sorted by (check, elements); NONE omitted

  bool has(Verdict v) const;
  /// Ids of checks with at least one entry carrying `v`.
  std::vector<std::string> checks_with(Verdict v) const;
};

/// Runs every condition and constraint. Throws CapacityError when
/// flattening or path search exceeds its bound.
RefinementReport check_refinement(const Statechart& original, const Statechart& refined,
                                  const RefinementMapping& mapping, const CheckOptions& options = {});

std::string report_to_json(const RefinementReport& report);
std::string report_to_text(const RefinementReport& report);

}  // namespace scref
