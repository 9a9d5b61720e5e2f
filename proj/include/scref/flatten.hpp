#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scref/model.hpp"
#include "scref/result.hpp"

namespace scref {

/// Active basic (and final) states: one per active orthogonal region.
using Configuration = std::set<ElementId>;

struct FlatEdge {
  Configuration source;
  std::optional<std::string> trigger;
  Guard guard;
  std::set<std::string> outputs;
  Configuration target;
  std::set<ElementId> provenance;  // hierarchical transitions that produced the edge

  friend bool operator==(const FlatEdge&, const FlatEdge&) = default;
};

bool operator<(const FlatEdge& a, const FlatEdge& b);

struct FlatStatechart {
  std::string name;
  std::vector<Configuration> states;  // sorted
  Configuration initial;
  std::vector<FlatEdge> transitions;  // sorted
  std::set<std::string> events;
  std::map<std::string, std::string> variables;
  std::map<ElementId, std::string> leaf_names;

  /// Id used for a configuration when the flat model is written as a DSL
  /// model: member ids, sorted, joined by "__".
  std::string configuration_id(const Configuration& c) const;
  /// Member names, sorted, joined by "+".
  std::string configuration_name(const Configuration& c) const;
};

struct FlattenOptions {
  std::size_t max_configurations = 4096;
};

/// Outer-first flattening into configurations and configuration edges.
/// Throws CapacityError when the configuration count exceeds the bound.
FlatStatechart flatten(const Statechart& sc, const FlattenOptions& options = {});

/// Number of legal configurations, saturating at `limit + 1`.
std::size_t count_configurations(const Statechart& sc, std::size_t limit);

/// The flat statechart as a one-level model: each configuration becomes a
/// basic state, each edge a transition.
Statechart flat_to_model(const FlatStatechart& flat);

struct LtsEdge {
  std::size_t source = 0;
  std::optional<std::string> trigger;
  Guard guard;
  std::set<std::string> outputs;
  std::size_t target = 0;
};

/// "e[guard]/x,y" with the empty parts left out.
std::string edge_label(const std::optional<std::string>& trigger, const Guard& guard,
                       const std::set<std::string>& outputs);

/// Graph view over a flat statechart, indexed by source node.
class Lts {
 public:
  explicit Lts(const FlatStatechart& flat);
  Lts(std::size_t node_count, std::vector<LtsEdge> edges);

  std::size_t size() const { return node_count_; }
  const std::vector<LtsEdge>& edges() const { return edges_; }
  /// Indices into edges() leaving `node`.
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  /// Edges leaving `node` whose trigger equals `trigger`.
  std::vector<std::size_t> edges_by_trigger(std::size_t node,
                                            const std::optional<std::string>& trigger) const;
  std::optional<std::size_t> index_of(const Configuration& c) const;
  const Configuration& configuration(std::size_t node) const { return configs_.at(node); }
  /// Member ids joined by "__", or "#<node>" for graphs built from raw edges.
  std::string node_label(std::size_t node) const;

  /// Nodes reachable from `starts` in zero or more steps. Throws
  /// CapacityError after `budget` edge expansions.
  std::vector<bool> reachable(const std::vector<std::size_t>& starts, std::size_t budget) const;

  /// Path s -e-> s'' ->* s''' -/x-> s' (or a single edge s -e/x-> s') with
  /// `accept(s')`. Guards are ignored.
  bool has_refining_path(std::size_t start, const std::optional<std::string>& trigger,
                         const std::set<std::string>& outputs,
                         const std::vector<bool>& accept, std::size_t budget) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<LtsEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<Configuration> configs_;
  std::map<Configuration, std::size_t> index_;
};

}  // namespace scref
