#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dplimit {

/// Canonical state encoding: a pair of integers. Finite problems use
/// (index, 0); generators choose their own layout.
struct State {
  std::int64_t a = 0;
  std::int64_t b = 0;
  auto operator<=>(const State&) const = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(s.a) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(s.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

using StateSet = std::set<State>;

/// Lazily expanded state space. Implementations must be pure: the same state
/// always yields the same successors and reward.
class Generator {
 public:
  virtual ~Generator() = default;

  virtual std::string name() const = 0;
  virtual bool contains(const State& z) const = 0;
  /// Nonempty successor list. May throw CapExceeded when expansion would
  /// leave the generator's window.
  virtual std::vector<State> successors(const State& z) const = 0;
  virtual double reward(const State& z) const = 0;
  virtual std::string label(const State& z) const = 0;
  virtual std::optional<State> parse(std::string_view label) const = 0;
  virtual std::size_t branching_cap() const = 0;
  /// Longest horizon any query may expand from its origin.
  virtual std::size_t depth_cap() const = 0;
};

/// Explicit finite problem: states 0..n-1 with names, successor lists and
/// rewards.
struct FiniteGraph {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> successors;
  std::vector<double> rewards;
};

/// A deterministic dynamic programming problem (Z, F, r): nonempty
/// successor sets and rewards in [0, 1]. Immutable once built.
class Problem {
 public:
  /// Validates the graph; throws InvalidInstance on empty successor sets,
  /// out-of-range indices, duplicate names or rewards outside [0, 1].
  static Problem finite(FiniteGraph graph);
  static Problem generated(std::shared_ptr<const Generator> generator);

  bool is_finite() const { return finite_ != nullptr; }
  const FiniteGraph& graph() const;  // finite problems only
  const Generator& generator() const;  // generated problems only
  std::string name() const;

  std::size_t size() const;  // finite problems only
  std::vector<State> states() const;  // finite problems only, in index order
  static State finite_state(std::size_t index) { return {static_cast<std::int64_t>(index), 0}; }

  bool contains(const State& z) const;
  /// F(z). Throws UnknownState for states outside the problem.
  std::vector<State> successors(const State& z) const;
  double reward(const State& z) const;
  std::string label(const State& z) const;
  /// Inverse of label(); throws UnknownState.
  State parse(std::string_view label) const;

  /// No limit for finite problems.
  std::optional<std::size_t> depth_cap() const;
  /// Throws CapExceeded when a horizon exceeds the depth cap.
  void check_horizon(std::size_t horizon) const;

  /// True when every successor set is a singleton (finite problems only).
  bool is_uncontrolled() const;

 private:
  std::shared_ptr<const FiniteGraph> finite_;
  std::shared_ptr<const Generator> generator_;
};

/// A feasible finite play prefix z_1..z_T from an origin z_0.
class Play {
 public:
  /// Throws InvalidInstance if the prefix is empty or infeasible.
  Play(const Problem& p, State origin, std::vector<State> prefix);

  const State& origin() const { return origin_; }
  const std::vector<State>& prefix() const { return prefix_; }
  std::size_t length() const { return prefix_.size(); }

  /// Follows the first listed successor for `length` stages.
  static Play first_successor(const Problem& p, State origin, std::size_t length);

 private:
  State origin_;
  std::vector<State> prefix_;
};

// Reachability. F^0(z) = {z}, F^{n+1} = F^n o F, G^m = union_{n<=m} F^n.

StateSet reach_exact(const Problem& p, const State& z, std::size_t n);
StateSet reach_within(const Problem& p, const State& z, std::size_t m);

struct Closure {
  StateSet states;
  // G^m(z) = G^{m+1}(z) was observed; false when a cap or window stopped
  // the expansion first.
  bool saturated = false;
  std::size_t rounds = 0;
};

/// G^infinity(z) by breadth-first saturation. Exact for finite problems;
/// generated problems stop at the depth cap or the generator's window.
Closure reach_closure(const Problem& p, const State& z);

}  // namespace dplimit
