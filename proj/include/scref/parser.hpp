#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "scref/mapping.hpp"
#include "scref/model.hpp"
#include "scref/script.hpp"

namespace scref {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message);

  const SourceSpan& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

/// Parses one `statechart NAME { ... }` model and resolves every event,
/// variable and state reference.
Statechart parse_statechart(std::string_view text, const std::string& file = "<input>");
std::string serialize_statechart(const Statechart& sc);

/// One `REFINED_ID => ORIGINAL_ID [RULE]?` pair per line; `//` comments.
RefinementMapping parse_mapping(std::string_view text, const Statechart& original,
                                const Statechart& refined, const std::string& file = "<input>");
std::string serialize_mapping(const RefinementMapping& mapping);

/// An empty script parses to a single Identity step.
RefinementScript parse_script(std::string_view text, const std::string& file = "<input>");
std::string serialize_script(const RefinementScript& script);

/// Parses `abstract`, `standard, virtual`, ... (the text between << and >>).
Modifier parse_modifier(std::string_view text);

}  // namespace scref
