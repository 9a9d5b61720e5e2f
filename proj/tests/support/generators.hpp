#pragma once

#include <random>

#include "scref/flatten.hpp"
#include "scref/model.hpp"
#include "scref/script.hpp"

namespace scref::testing {

struct ModelShape {
  int max_states = 15;
  int max_depth = 3;
  int max_and_levels = 2;
  int max_transitions = 12;
  bool flat = false;            // root Or over basic states only
  bool and_states = true;
  bool symbolic_guards = false; // every guard is a non-trivial atom
  bool modifiers = true;
};

/// A random well-formed statechart over events e0..e3 and boolean v0..v2.
Statechart random_model(std::mt19937& rng, const ModelShape& shape = {});

enum class RuleKind { R1Basic, R1Or, R1And, R2, R3, R4, R7 };

/// A step of the requested kind that the refiner should accept, or nullopt
/// when the model has no suitable element.
std::optional<RefinementStep> random_step(std::mt19937& rng, const Statechart& sc, RuleKind kind);

/// A step of any applicable kind (identity when nothing applies).
RefinementStep random_any_step(std::mt19937& rng, const Statechart& sc);

/// A random graph with `nodes` nodes; triggers drawn from a..c, outputs from x..y.
Lts random_lts(std::mt19937& rng, std::size_t nodes, std::size_t max_out_degree);

}  // namespace scref::testing
