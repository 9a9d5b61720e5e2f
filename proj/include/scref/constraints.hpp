#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scref/mapping.hpp"
#include "scref/model.hpp"
#include "scref/result.hpp"

namespace scref {

/// All refined elements that share one original.
struct EntryGroup {
  ElementId original;
  std::vector<ElementId> refined;
};

/// Shared, precomputed view of one (original, refined, mapping) triple.
class ConstraintContext {
 public:
  ConstraintContext(const Statechart& original, const Statechart& refined,
                    const RefinementMapping& mapping);

  const Statechart& original() const { return *orig_; }
  const Statechart& refined() const { return *ref_; }
  const RefinementMapping& mapping() const { return *mapping_; }
  const Hierarchy& original_hierarchy() const { return oh_; }
  const Hierarchy& refined_hierarchy() const { return rh_; }

  /// Groups in original-id order; originals without images are included
  /// with an empty refined list.
  const std::vector<EntryGroup>& groups() const { return groups_; }
  const EntryGroup* group(const ElementId& original) const;

  /// Refined states mapped onto original state `s`.
  std::vector<ElementId> image(const ElementId& s) const;
  /// image(s) plus every refined descendant of those states.
  std::set<ElementId> image_closure(const ElementId& s) const;
  /// The refined state standing for `s`: the same-id image if present,
  /// else the first image in id order.
  std::optional<ElementId> principal(const ElementId& s) const;
  /// Refined transitions of a group.
  std::vector<const Transition*> transitions_of(const EntryGroup& g) const;

  bool refined_virtual(const ElementId& id) const;
  bool original_locked(const ElementId& id) const;

 private:
  const Statechart* orig_;
  const Statechart* ref_;
  const RefinementMapping* mapping_;
  Hierarchy oh_;
  Hierarchy rh_;
  std::vector<EntryGroup> groups_;
  std::map<ElementId, std::size_t> group_index_;
};

using ConstraintFn = std::function<ConstraintResult(const EntryGroup&, const ConstraintContext&)>;

struct Constraint {
  std::string id;
  ConstraintFn evaluate;
};

// Transition refinement (R2).
ConstraintResult exclusive_guards(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult minimal_guard(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult original_broadcast(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult original_events(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult reachability(const EntryGroup& g, const ConstraintContext& ctx);

// State refinement (R1, R3-R7).
ConstraintResult original_name(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult original_transitions(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult substate_mappings(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult history(const EntryGroup& g, const ConstraintContext& ctx);
ConstraintResult pseudo_state_rules(const EntryGroup& g, const ConstraintContext& ctx);

/// The nine rule constraints with their stable ids.
const std::vector<Constraint>& rule_constraints();
const Constraint* find_constraint(const std::string& id);

/// WARN when any element of `sc` is still effectively abstract.
ConstraintResult sc_fully_defined(const Statechart& sc);

/// One result per effectively locked original: its only image must be the
/// same-id element, unchanged.
std::vector<ConstraintResult> check_locked(const ConstraintContext& ctx);

}  // namespace scref
