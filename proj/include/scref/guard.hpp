#pragma once

#include <string>
#include <vector>

namespace scref {

/// Transition guard: a predicate tree over variables.
///
/// The textual grammar only produces True, Atom, Not and And nodes. Or exists
/// so that disjunctive guards can be built programmatically and rejected by
/// the inclusion checks; the parser never yields one.
class Guard {
 public:
  enum class Kind { True, Atom, Not, And, Or };

  Guard() = default;

  static Guard atom(std::string text);
  static Guard negate(Guard operand);
  static Guard conj(Guard lhs, Guard rhs);
  static Guard disj(Guard lhs, Guard rhs);

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  const std::string& text() const { return text_; }
  const Guard& operand() const { return operands_.at(0); }
  const Guard& lhs() const { return operands_.at(0); }
  const Guard& rhs() const { return operands_.at(1); }

  bool has_disjunction() const;

  /// Canonical text, re-parseable whenever the tree holds no Or node.
  std::string to_string() const;

  /// Atom texts in left-to-right order.
  void collect_atoms(std::vector<std::string>& out) const;

  friend bool operator==(const Guard& a, const Guard& b);

 private:
  Kind kind_ = Kind::True;
  std::string text_;
  std::vector<Guard> operands_;
};

/// Conjunction that absorbs True operands.
Guard conj_simplified(Guard lhs, Guard rhs);

/// True iff `refined` is literally `original`, or a left-nested chain
/// `original && p1 && ... && pn` with disjunction-free extensions. A True
/// original is extended by any disjunction-free guard.
bool guard_extends(const Guard& original, const Guard& refined);

/// Literal negation test in either direction: a == !b or b == !a.
bool is_literal_negation(const Guard& a, const Guard& b);

}  // namespace scref
