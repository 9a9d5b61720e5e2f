#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scref/guard.hpp"

namespace scref {

/// Identifier of a state or transition, unique within one statechart.
using ElementId = std::string;

/// Id of the implicit top-level Or-state. It is not a valid DSL identifier,
/// so it cannot collide with user ids.
inline const ElementId kRootId = "$root";

struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int length = 0;
};

enum class StateKind {
  Basic,
  Or,
  And,
  Region,
  Final,
  HistoryShallow,
  HistoryDeep,
  Fork,
  Join,
  Split,
  Merge,
};

std::string_view to_string(StateKind kind);

/// Or, And and Region: the only kinds allowed to contain children.
bool is_composite(StateKind kind);
/// Final, history and the fork/join/split/merge connectors.
bool is_pseudo(StateKind kind);
/// Pseudo-states that never appear in a configuration.
bool is_transient(StateKind kind);
/// Basic and Final: the members of configurations.
bool is_leaf(StateKind kind);

enum class BaseModifier { Abstract, Standard, Locked };

struct Modifier {
  BaseModifier base = BaseModifier::Standard;
  bool is_virtual = false;

  friend bool operator==(const Modifier&, const Modifier&) = default;
};

std::string to_string(const Modifier& m);

struct Assignment {
  std::string variable;
  std::string expression;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Action {
  std::vector<Assignment> assignments;

  friend bool operator==(const Action&, const Action&) = default;
};

struct State {
  ElementId id;
  std::string name;
  StateKind kind = StateKind::Basic;
  std::vector<ElementId> children;
  bool is_default = false;
  std::optional<Action> entry;
  std::optional<Action> exit;
  std::optional<Modifier> modifier;
  SourceSpan span;  // not part of equality

  friend bool operator==(const State& a, const State& b);
};

struct Transition {
  ElementId id;
  ElementId source;
  ElementId target;
  std::optional<std::string> trigger;
  Guard guard;
  std::set<std::string> outputs;
  std::optional<Modifier> modifier;
  SourceSpan span;  // not part of equality

  friend bool operator==(const Transition& a, const Transition& b);
};

struct Statechart {
  std::string name;
  std::set<std::string> events;
  std::map<std::string, std::string> variables;  // name -> type
  ElementId root = kRootId;
  std::map<ElementId, State> states;
  std::map<ElementId, Transition> transitions;

  /// A model holding only the implicit root.
  static Statechart empty(std::string name);

  const State* find_state(const ElementId& id) const;
  const Transition* find_transition(const ElementId& id) const;
  const State& state(const ElementId& id) const;
  const Transition& transition(const ElementId& id) const;
  bool contains(const ElementId& id) const;

  friend bool operator==(const Statechart&, const Statechart&) = default;
};

/// Parent/ancestor queries over the containment tree.
class Hierarchy {
 public:
  explicit Hierarchy(const Statechart& sc);

  std::optional<ElementId> parent(const ElementId& id) const;
  /// Proper ancestors, nearest first, ending with the root.
  std::vector<ElementId> ancestors(const ElementId& id) const;
  bool is_ancestor(const ElementId& ancestor, const ElementId& descendant) const;
  bool is_ancestor_or_self(const ElementId& ancestor, const ElementId& descendant) const;
  /// Every state strictly below `id`.
  std::vector<ElementId> descendants(const ElementId& id) const;
  /// Lowest Or/Region/root that properly contains every element of `ids`.
  ElementId scope_of(const std::vector<ElementId>& ids) const;
  /// Lowest state that properly contains both endpoints of `t`.
  ElementId container_of(const Transition& t) const;

 private:
  const Statechart* sc_;
  std::map<ElementId, ElementId> parent_;
};

struct Diagnostic {
  std::string code;
  ElementId element;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Structural well-formedness; an empty result means the model is legal.
std::vector<Diagnostic> check_well_formed(const Statechart& sc);

/// Identifier tokens inside an opaque guard atom or action expression,
/// excluding numbers and the literals true/false.
std::vector<std::string> referenced_identifiers(std::string_view text);

}  // namespace scref
