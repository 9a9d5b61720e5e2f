#include "scref/guard.hpp"

#include <utility>

namespace scref {

Guard Guard::atom(std::string text) {
  Guard g;
  g.kind_ = Kind::Atom;
  g.text_ = std::move(text);
  return g;
}

Guard Guard::negate(Guard operand) {
  Guard g;
  g.kind_ = Kind::Not;
  g.operands_.push_back(std::move(operand));
  return g;
}

Guard Guard::conj(Guard lhs, Guard rhs) {
  Guard g;
  g.kind_ = Kind::And;
  g.operands_.push_back(std::move(lhs));
  g.operands_.push_back(std::move(rhs));
  return g;
}

Guard Guard::disj(Guard lhs, Guard rhs) {
  Guard g;
  g.kind_ = Kind::Or;
  g.operands_.push_back(std::move(lhs));
  g.operands_.push_back(std::move(rhs));
  return g;
}

bool Guard::has_disjunction() const {
  if (kind_ == Kind::Or) return true;
  for (const auto& op : operands_)
    if (op.has_disjunction()) return true;
  return false;
}

namespace {

bool is_binary(Guard::Kind k) { return k == Guard::Kind::And || k == Guard::Kind::Or; }

std::string wrapped(const Guard& g) {
  auto s = g.to_string();
  return is_binary(g.kind()) ? "(" + s + ")" : s;
}

}  // namespace

std::string Guard::to_string() const {
  switch (kind_) {
    case Kind::True:
      return "true";
    case Kind::Atom:
      return text_;
    case Kind::Not:
      return "!" + wrapped(operand());
    case Kind::And: {
      // && is left-associative, so only a non-And left operand needs parens.
      auto left = lhs().kind() == Kind::And ? lhs().to_string() : wrapped(lhs());
      return left + " && " + wrapped(rhs());
    }
    case Kind::Or:
      return wrapped(lhs()) + " || " + wrapped(rhs());
  }
  return {};
}

void Guard::collect_atoms(std::vector<std::string>& out) const {
  if (kind_ == Kind::Atom) out.push_back(text_);
  for (const auto& op : operands_) op.collect_atoms(out);
}

bool operator==(const Guard& a, const Guard& b) {
  return a.kind_ == b.kind_ && a.text_ == b.text_ && a.operands_ == b.operands_;
}

Guard conj_simplified(Guard lhs, Guard rhs) {
  if (lhs.is_true()) return rhs;
  if (rhs.is_true()) return lhs;
  return Guard::conj(std::move(lhs), std::move(rhs));
}

bool guard_extends(const Guard& original, const Guard& refined) {
  if (refined == original) return true;
  if (refined.has_disjunction()) return false;
  if (original.is_true()) return true;
  const Guard* cur = &refined;
  while (cur->kind() == Guard::Kind::And) {
    if (cur->lhs() == original) return true;
    cur = &cur->lhs();
  }
  return false;
}

bool is_literal_negation(const Guard& a, const Guard& b) {
  if (a.kind() == Guard::Kind::Not && a.operand() == b) return true;
  if (b.kind() == Guard::Kind::Not && b.operand() == a) return true;
  return false;
}

}  // namespace scref
