#include "scref/flatten.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace scref {

namespace {

auto edge_key(const FlatEdge& e) {
  return std::make_tuple(std::cref(e.source), std::cref(e.trigger), e.guard.to_string(),
                         std::cref(e.outputs), std::cref(e.target));
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

bool operator<(const FlatEdge& a, const FlatEdge& b) { return edge_key(a) < edge_key(b); }

std::string FlatStatechart::configuration_id(const Configuration& c) const {
  return join(std::vector<std::string>(c.begin(), c.end()), "__");
}

std::string FlatStatechart::configuration_name(const Configuration& c) const {
  std::vector<std::string> names;
  for (const auto& id : c) {
    auto it = leaf_names.find(id);
    names.push_back(it == leaf_names.end() ? id : it->second);
  }
  std::sort(names.begin(), names.end());
  return join(names, "+");
}

namespace {

// A compound transition: one hierarchical transition plus whatever chain of
// fork/join/split/merge/history connectors it passes through.
struct Step {
  std::vector<ElementId> sources;
  std::optional<std::string> trigger;
  Guard guard;
  std::set<std::string> outputs;
  std::vector<ElementId> targets;
  std::set<ElementId> provenance;
};

struct Continuation {
  Guard guard;
  std::set<std::string> outputs;
  std::vector<ElementId> targets;
  std::set<ElementId> provenance;
};

constexpr int kMaxConnectorDepth = 32;

class Flattener {
 public:
  Flattener(const Statechart& sc, const FlattenOptions& options)
      : sc_(sc), h_(sc), options_(options) {
    for (const auto& [id, t] : sc.transitions) {
      outgoing_[t.source].push_back(&t);
      incoming_[t.target].push_back(&t);
    }
  }

  FlatStatechart run() {
    if (count_configurations(sc_, options_.max_configurations) > options_.max_configurations)
      throw CapacityError("statechart '" + sc_.name + "' has more than " +
                          std::to_string(options_.max_configurations) + " configurations");

    FlatStatechart flat;
    flat.name = sc_.name;
    flat.events = sc_.events;
    flat.variables = sc_.variables;
    for (const auto& [id, s] : sc_.states)
      if (is_leaf(s.kind)) flat.leaf_names[id] = s.name;

    flat.states = enumerate(sc_.root);
    std::sort(flat.states.begin(), flat.states.end());
    flat.states.erase(std::unique(flat.states.begin(), flat.states.end()), flat.states.end());
    flat.initial = enter(sc_.root, {});

    auto steps = compound_steps();
    std::map<std::tuple<Configuration, std::optional<std::string>, std::string,
                        std::set<std::string>, Configuration>,
             FlatEdge>
        edges;
    for (const auto& config : flat.states) {
      auto closed = closure(config);
      std::vector<const Step*> enabled;
      for (const auto& step : steps) {
        bool active = std::all_of(step.sources.begin(), step.sources.end(),
                                  [&](const ElementId& s) { return closed.count(s) > 0; });
        if (active) enabled.push_back(&step);
      }
      for (const auto* step : enabled) {
        if (preempted(*step, enabled)) continue;
        FlatEdge e{config, step->trigger, step->guard, step->outputs, apply(*step, config),
                   step->provenance};
        auto key = std::make_tuple(e.source, e.trigger, e.guard.to_string(), e.outputs, e.target);
        auto [it, inserted] = edges.emplace(key, e);
        if (!inserted) it->second.provenance.insert(e.provenance.begin(), e.provenance.end());
      }
    }
    for (auto& [key, e] : edges) flat.transitions.push_back(std::move(e));
    std::sort(flat.transitions.begin(), flat.transitions.end());
    return flat;
  }

 private:
  std::vector<Configuration> enumerate(const ElementId& id) const {
    const State& s = sc_.state(id);
    if (is_leaf(s.kind)) return {{id}};
    std::vector<Configuration> out;
    if (s.kind == StateKind::And) {
      out.push_back({});
      for (const auto& region : s.children) {
        std::vector<Configuration> next;
        for (const auto& part : enumerate(region))
          for (const auto& prefix : out) {
            Configuration c = prefix;
            c.insert(part.begin(), part.end());
            next.push_back(std::move(c));
          }
        out = std::move(next);
      }
      return out;
    }
    if (is_composite(s.kind)) {
      for (const auto& child : s.children) {
        if (is_transient(sc_.state(child).kind)) continue;
        auto sub = enumerate(child);
        out.insert(out.end(), sub.begin(), sub.end());
      }
    }
    return out;
  }

  std::set<ElementId> closure(const Configuration& c) const {
    std::set<ElementId> out(c.begin(), c.end());
    for (const auto& member : c)
      for (const auto& a : h_.ancestors(member)) out.insert(a);
    return out;
  }

  // Default entry of `node`, steering towards `targets` where they lie below.
  Configuration enter(const ElementId& node, const std::vector<ElementId>& targets) const {
    const State& s = sc_.state(node);
    if (is_leaf(s.kind)) return {node};
    Configuration out;
    if (s.kind == StateKind::And) {
      for (const auto& region : s.children) {
        auto part = enter(region, targets);
        out.insert(part.begin(), part.end());
      }
      return out;
    }
    const ElementId* chosen = nullptr;
    for (const auto& child : s.children) {
      if (is_transient(sc_.state(child).kind)) continue;
      bool holds_target = std::any_of(targets.begin(), targets.end(), [&](const ElementId& t) {
        return h_.is_ancestor_or_self(child, t);
      });
      if (holds_target) {
        chosen = &child;
        break;
      }
    }
    if (!chosen)
      for (const auto& child : s.children)
        if (sc_.state(child).is_default) {
          chosen = &child;
          break;
        }
    if (!chosen) return out;
    return enter(*chosen, targets);
  }

  Configuration apply(const Step& step, const Configuration& config) const {
    std::vector<ElementId> ends = step.sources;
    ends.insert(ends.end(), step.targets.begin(), step.targets.end());
    ElementId scope = h_.scope_of(ends);
    Configuration out;
    for (const auto& member : config)
      if (!h_.is_ancestor(scope, member)) out.insert(member);
    auto entered = enter(scope, step.targets);
    out.insert(entered.begin(), entered.end());
    return out;
  }

  // Outer-first: a transition is dropped when an enabled transition on the
  // same trigger leaves an enclosing state and both guards are literally true.
  bool preempted(const Step& inner, const std::vector<const Step*>& enabled) const {
    if (!inner.guard.is_true()) return false;
    for (const auto* outer : enabled) {
      if (outer == &inner || outer->trigger != inner.trigger || !outer->guard.is_true()) continue;
      for (const auto& a : outer->sources)
        for (const auto& b : inner.sources)
          if (h_.is_ancestor(a, b)) return true;
    }
    return false;
  }

  std::vector<Continuation> follow(const Transition& t, int depth) const {
    std::vector<Continuation> out;
    for (auto c : continue_from(t.target, depth + 1)) {
      c.guard = conj_simplified(t.guard, std::move(c.guard));
      c.outputs.insert(t.outputs.begin(), t.outputs.end());
      c.provenance.insert(t.id);
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<Continuation> continue_from(const ElementId& target, int depth) const {
    if (depth > kMaxConnectorDepth) return {};
    const State& s = sc_.state(target);
    auto outgoing = [&]() -> const std::vector<const Transition*>& {
      static const std::vector<const Transition*> none;
      auto it = outgoing_.find(target);
      return it == outgoing_.end() ? none : it->second;
    };
    switch (s.kind) {
      case StateKind::HistoryShallow:
      case StateKind::HistoryDeep:
        return {Continuation{{}, {}, {h_.parent(target).value_or(sc_.root)}, {}}};
      case StateKind::Fork: {
        std::vector<Continuation> acc{Continuation{}};
        for (const auto* u : outgoing()) {
          std::vector<Continuation> next;
          for (const auto& branch : follow(*u, depth))
            for (const auto& prefix : acc) {
              Continuation c = prefix;
              c.guard = conj_simplified(c.guard, branch.guard);
              c.outputs.insert(branch.outputs.begin(), branch.outputs.end());
              c.targets.insert(c.targets.end(), branch.targets.begin(), branch.targets.end());
              c.provenance.insert(branch.provenance.begin(), branch.provenance.end());
              next.push_back(std::move(c));
            }
          acc = std::move(next);
        }
        return acc;
      }
      case StateKind::Split:
      case StateKind::Merge: {
        std::vector<Continuation> out;
        for (const auto* u : outgoing()) {
          auto sub = follow(*u, depth);
          out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
      }
      case StateKind::Join:
        return {};  // compiled from the join's side, see compound_steps()
      default:
        return {Continuation{{}, {}, {target}, {}}};
    }
  }

  std::vector<Step> compound_steps() const {
    std::vector<Step> steps;
    for (const auto& [id, t] : sc_.transitions) {
      if (is_transient(sc_.state(t.source).kind)) continue;
      for (auto& c : follow(t, 0))
        steps.push_back({{t.source}, t.trigger, std::move(c.guard), std::move(c.outputs),
                         std::move(c.targets), std::move(c.provenance)});
    }
    for (const auto& [id, s] : sc_.states) {
      if (s.kind != StateKind::Join) continue;
      auto in = incoming_.find(id);
      auto out = outgoing_.find(id);
      if (in == incoming_.end() || out == outgoing_.end()) continue;
      Step base;
      for (const auto* t : in->second) {
        if (is_transient(sc_.state(t->source).kind)) continue;
        base.sources.push_back(t->source);
        if (!base.trigger) base.trigger = t->trigger;
        base.guard = conj_simplified(base.guard, t->guard);
        base.outputs.insert(t->outputs.begin(), t->outputs.end());
        base.provenance.insert(t->id);
      }
      if (base.sources.empty()) continue;
      for (const auto* u : out->second)
        for (auto& c : follow(*u, 0)) {
          Step step = base;
          step.guard = conj_simplified(step.guard, c.guard);
          step.outputs.insert(c.outputs.begin(), c.outputs.end());
          step.targets = c.targets;
          step.provenance.insert(c.provenance.begin(), c.provenance.end());
          steps.push_back(std::move(step));
        }
    }
    return steps;
  }

  const Statechart& sc_;
  Hierarchy h_;
  FlattenOptions options_;
  std::map<ElementId, std::vector<const Transition*>> outgoing_;
  std::map<ElementId, std::vector<const Transition*>> incoming_;
};

std::size_t saturating_mul(std::size_t a, std::size_t b, std::size_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return std::min(a * b, cap);
}

std::size_t count_below(const Statechart& sc, const ElementId& id, std::size_t cap) {
  const State& s = sc.state(id);
  if (is_leaf(s.kind)) return 1;
  if (s.kind == StateKind::And) {
    std::size_t n = 1;
    for (const auto& region : s.children) n = saturating_mul(n, count_below(sc, region, cap), cap);
    return n;
  }
  std::size_t n = 0;
  if (is_composite(s.kind))
    for (const auto& child : s.children)
      if (!is_transient(sc.state(child).kind)) n = std::min(cap, n + count_below(sc, child, cap));
  return n;
}

}  // namespace

std::size_t count_configurations(const Statechart& sc, std::size_t limit) {
  return count_below(sc, sc.root, limit + 1);
}

FlatStatechart flatten(const Statechart& sc, const FlattenOptions& options) {
  return Flattener(sc, options).run();
}

Statechart flat_to_model(const FlatStatechart& flat) {
  Statechart sc = Statechart::empty(flat.name);
  sc.events = flat.events;
  sc.variables = flat.variables;
  auto& root = sc.states.at(sc.root);
  for (const auto& c : flat.states) {
    State s;
    s.id = flat.configuration_id(c);
    s.name = flat.configuration_name(c);
    s.is_default = c == flat.initial;
    root.children.push_back(s.id);
    sc.states.emplace(s.id, std::move(s));
  }
  std::size_t counter = 0;
  auto fresh = [&] {
    std::string id;
    do {
      id = "f" + std::to_string(++counter);
    } while (sc.contains(id));
    return id;
  };
  for (const auto& e : flat.transitions) {
    Transition t;
    if (e.provenance.size() == 1 && !sc.contains(*e.provenance.begin()))
      t.id = *e.provenance.begin();
    else
      t.id = fresh();
    t.source = flat.configuration_id(e.source);
    t.target = flat.configuration_id(e.target);
    t.trigger = e.trigger;
    t.guard = e.guard;
    t.outputs = e.outputs;
    sc.transitions.emplace(t.id, std::move(t));
  }
  return sc;
}

Lts::Lts(const FlatStatechart& flat) : node_count_(flat.states.size()), configs_(flat.states) {
  for (std::size_t i = 0; i < configs_.size(); ++i) index_.emplace(configs_[i], i);
  out_.resize(node_count_);
  for (const auto& e : flat.transitions) {
    LtsEdge edge{index_.at(e.source), e.trigger, e.guard, e.outputs, index_.at(e.target)};
    out_[edge.source].push_back(edges_.size());
    edges_.push_back(std::move(edge));
  }
}

Lts::Lts(std::size_t node_count, std::vector<LtsEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)), out_(node_count) {
  for (std::size_t i = 0; i < edges_.size(); ++i) out_.at(edges_[i].source).push_back(i);
}

std::string Lts::node_label(std::size_t node) const {
  if (configs_.empty()) return "#" + std::to_string(node);
  return join(std::vector<std::string>(configs_[node].begin(), configs_[node].end()), "__");
}

std::string edge_label(const std::optional<std::string>& trigger, const Guard& guard,
                       const std::set<std::string>& outputs) {
  std::string out = trigger.value_or("");
  if (!guard.is_true()) out += "[" + guard.to_string() + "]";
  if (!outputs.empty())
    out += "/" + join(std::vector<std::string>(outputs.begin(), outputs.end()), ",");
  return out;
}

std::vector<std::size_t> Lts::edges_by_trigger(std::size_t node,
                                               const std::optional<std::string>& trigger) const {
  std::vector<std::size_t> out;
  for (auto i : out_[node])
    if (edges_[i].trigger == trigger) out.push_back(i);
  return out;
}

std::optional<std::size_t> Lts::index_of(const Configuration& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<bool> Lts::reachable(const std::vector<std::size_t>& starts, std::size_t budget) const {
  std::vector<bool> seen(node_count_, false);
  std::deque<std::size_t> queue;
  for (auto s : starts)
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  std::size_t expansions = 0;
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (auto i : out_[cur]) {
      if (++expansions > budget)
        throw CapacityError("path search exceeded " + std::to_string(budget) + " expansions");
      auto t = edges_[i].target;
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

bool Lts::has_refining_path(std::size_t start, const std::optional<std::string>& trigger,
                            const std::set<std::string>& outputs,
                            const std::vector<bool>& accept, std::size_t budget) const {
  std::vector<std::size_t> after_first;
  for (auto i : edges_by_trigger(start, trigger)) {
    const auto& e = edges_[i];
    if (e.outputs == outputs && accept[e.target]) return true;
    after_first.push_back(e.target);
  }
  if (after_first.empty()) return false;
  auto seen = reachable(after_first, budget);
  for (const auto& e : edges_)
    if (seen[e.source] && e.outputs == outputs && accept[e.target]) return true;
  return false;
}

}  // namespace scref
