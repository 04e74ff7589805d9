#include "dplimit/state_space.hpp"

#include <unordered_map>

#include "dplimit/errors.hpp"

namespace dplimit {

Problem Problem::finite(FiniteGraph graph) {
  const std::size_t n = graph.names.size();
  if (n == 0) throw InvalidInstance("problem has no states");
  if (graph.successors.size() != n || graph.rewards.size() != n)
    throw InvalidInstance("successor and reward tables must list every state");
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.emplace(graph.names[i], i).second)
      throw InvalidInstance("duplicate state name '" + graph.names[i] + "'");
    if (graph.successors[i].empty())
      throw InvalidInstance("state '" + graph.names[i] + "' has no successor");
    for (std::size_t j : graph.successors[i])
      if (j >= n) throw InvalidInstance("successor index out of range at '" + graph.names[i] + "'");
    const double r = graph.rewards[i];
    if (!(r >= 0.0 && r <= 1.0))
      throw InvalidInstance("reward of '" + graph.names[i] + "' is outside [0, 1]");
  }
  Problem p;
  p.finite_ = std::make_shared<const FiniteGraph>(std::move(graph));
  return p;
}

Problem Problem::generated(std::shared_ptr<const Generator> generator) {
  if (!generator) throw InvalidInstance("null generator");
  Problem p;
  p.generator_ = std::move(generator);
  return p;
}

const FiniteGraph& Problem::graph() const {
  if (!finite_) throw InvalidInstance("operation requires a finite-explicit problem");
  return *finite_;
}

const Generator& Problem::generator() const {
  if (!generator_) throw InvalidInstance("operation requires a generated problem");
  return *generator_;
}

std::string Problem::name() const { return finite_ ? "finite" : generator_->name(); }

std::size_t Problem::size() const { return graph().names.size(); }

std::vector<State> Problem::states() const {
  std::vector<State> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(finite_state(i));
  return out;
}

bool Problem::contains(const State& z) const {
  if (finite_) return z.b == 0 && z.a >= 0 && static_cast<std::size_t>(z.a) < finite_->names.size();
  return generator_->contains(z);
}

std::vector<State> Problem::successors(const State& z) const {
  if (!contains(z)) throw UnknownState("unknown state " + std::to_string(z.a) + "," + std::to_string(z.b));
  if (finite_) {
    const auto& succ = finite_->successors[static_cast<std::size_t>(z.a)];
    std::vector<State> out;
    out.reserve(succ.size());
    for (std::size_t j : succ) out.push_back(finite_state(j));
    return out;
  }
  return generator_->successors(z);
}

double Problem::reward(const State& z) const {
  if (!contains(z)) throw UnknownState("unknown state " + std::to_string(z.a) + "," + std::to_string(z.b));
  if (finite_) return finite_->rewards[static_cast<std::size_t>(z.a)];
  return generator_->reward(z);
}

std::string Problem::label(const State& z) const {
  if (finite_) {
    if (!contains(z)) throw UnknownState("unknown state index " + std::to_string(z.a));
    return finite_->names[static_cast<std::size_t>(z.a)];
  }
  return generator_->label(z);
}

State Problem::parse(std::string_view label) const {
  if (finite_) {
    for (std::size_t i = 0; i < finite_->names.size(); ++i)
      if (finite_->names[i] == label) return finite_state(i);
    throw UnknownState("unknown state '" + std::string(label) + "'");
  }
  auto z = generator_->parse(label);
  if (!z || !generator_->contains(*z)) throw UnknownState("unknown state '" + std::string(label) + "'");
  return *z;
}

std::optional<std::size_t> Problem::depth_cap() const {
  if (finite_) return std::nullopt;
  return generator_->depth_cap();
}

void Problem::check_horizon(std::size_t horizon) const {
  if (auto cap = depth_cap(); cap && horizon > *cap)
    throw CapExceeded("horizon " + std::to_string(horizon) + " exceeds depth cap " +
                      std::to_string(*cap) + " of " + name());
}

bool Problem::is_uncontrolled() const {
  for (const auto& succ : graph().successors)
    if (succ.size() != 1) return false;
  return true;
}

Play::Play(const Problem& p, State origin, std::vector<State> prefix)
    : origin_(origin), prefix_(std::move(prefix)) {
  if (prefix_.empty()) throw InvalidInstance("play prefix must have at least one stage");
  State prev = origin_;
  for (const State& z : prefix_) {
    const auto succ = p.successors(prev);
    bool ok = false;
    for (const State& s : succ) ok = ok || s == z;
    if (!ok) throw InvalidInstance("play prefix is not feasible at '" + p.label(z) + "'");
    prev = z;
  }
}

Play Play::first_successor(const Problem& p, State origin, std::size_t length) {
  std::vector<State> prefix;
  prefix.reserve(length);
  State cur = origin;
  for (std::size_t t = 0; t < length; ++t) {
    cur = p.successors(cur).front();
    prefix.push_back(cur);
  }
  return Play(p, origin, std::move(prefix));
}

StateSet reach_exact(const Problem& p, const State& z, std::size_t n) {
  p.check_horizon(n);
  if (!p.contains(z)) throw UnknownState("unknown origin state");
  StateSet layer{z};
  for (std::size_t step = 0; step < n; ++step) {
    StateSet next;
    for (const State& x : layer)
      for (const State& y : p.successors(x)) next.insert(y);
    layer = std::move(next);
  }
  return layer;
}

StateSet reach_within(const Problem& p, const State& z, std::size_t m) {
  p.check_horizon(m);
  if (!p.contains(z)) throw UnknownState("unknown origin state");
  StateSet all{z};
  std::vector<State> frontier{z};
  for (std::size_t step = 0; step < m && !frontier.empty(); ++step) {
    std::vector<State> next;
    for (const State& x : frontier)
      for (const State& y : p.successors(x))
        if (all.insert(y).second) next.push_back(y);
    frontier = std::move(next);
  }
  return all;
}

Closure reach_closure(const Problem& p, const State& z) {
  if (!p.contains(z)) throw UnknownState("unknown origin state");
  const std::optional<std::size_t> cap = p.depth_cap();
  Closure out;
  out.states.insert(z);
  std::vector<State> frontier{z};
  bool partial = false;
  while (!frontier.empty()) {
    if (cap && out.rounds >= *cap) return out;
    std::vector<State> next;
    for (const State& x : frontier) {
      std::vector<State> succ;
      try {
        succ = p.successors(x);
      } catch (const CapExceeded&) {
        // Window edge: x cannot be expanded, so the closure is partial.
        partial = true;
        continue;
      }
      for (const State& y : succ)
        if (out.states.insert(y).second) next.push_back(y);
    }
    ++out.rounds;
    frontier = std::move(next);
  }
  out.saturated = !partial;
  return out;
}

}  // namespace dplimit
