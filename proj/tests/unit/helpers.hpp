#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "scref/parser.hpp"

namespace scref::testing {

inline std::string read_data(const std::string& relative) {
  std::ifstream in(std::string(SCREF_TEST_DATA) + "/" + relative, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Statechart model(const std::string& body, const std::string& name = "T") {
  return parse_statechart("statechart " + name + " {\n" + body + "\n}\n");
}

inline Statechart data_model(const std::string& relative) {
  return parse_statechart(read_data(relative), relative);
}

}  // namespace scref::testing
