#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scref/model.hpp"

namespace scref {

/// NONE: the check does not apply. WARN: mixed or indeterminate outcome.
enum class Verdict { Pass, Fail, Warn, None };

std::string_view to_string(Verdict v);

struct ConstraintResult {
  Verdict verdict = Verdict::None;
  std::string message;
  std::vector<ElementId> elements;

  static ConstraintResult pass(std::vector<ElementId> elements = {}, std::string message = {});
  static ConstraintResult fail(std::vector<ElementId> elements, std::string message);
  static ConstraintResult warn(std::vector<ElementId> elements, std::string message);
  static ConstraintResult none(std::vector<ElementId> elements = {});

  bool failed() const { return verdict == Verdict::Fail; }
};

/// Raised when flattening or path search exceeds its configured bound.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scref
