#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dplimit/evaluation.hpp"
#include "dplimit/family.hpp"
#include "dplimit/state_space.hpp"
#include "dplimit/value_engine.hpp"

namespace dplimit {

/// Probability with finite support over the states 0..n-1 of a house.
/// Entries are sorted by state and strictly positive.
class FiniteDistribution {
 public:
  /// Zero entries are dropped and duplicates merged. Throws InvalidInstance
  /// on negative mass or a total differing from 1 by more than 1e-12.
  explicit FiniteDistribution(std::vector<std::pair<std::size_t, double>> entries);
  static FiniteDistribution dirac(std::size_t x);
  /// Uniform over the given distinct states.
  static FiniteDistribution uniform(const std::vector<std::size_t>& states);

  const std::vector<std::pair<std::size_t, double>>& entries() const { return entries_; }
  double probability(std::size_t x) const;
  bool is_dirac() const { return entries_.size() == 1; }

  bool operator==(const FiniteDistribution&) const = default;

 private:
  std::vector<std::pair<std::size_t, double>> entries_;
};

/// Gambling house (X, F, r): from x the decision maker picks a distribution
/// in F(x), the next state is drawn from it and pays r.
class GamblingHouse {
 public:
  /// Throws InvalidInstance on empty transition sets, out-of-range support,
  /// duplicate names or rewards outside [0, 1].
  static GamblingHouse make(std::vector<std::string> names,
                            std::vector<std::vector<FiniteDistribution>> transitions,
                            std::vector<double> rewards);
  /// The Dirac embedding of a finite deterministic problem.
  static GamblingHouse from_problem(const Problem& p);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<FiniteDistribution>& transitions(std::size_t x) const { return transitions_.at(x); }
  double reward(std::size_t x) const { return rewards_.at(x); }
  const std::vector<double>& rewards() const { return rewards_; }
  std::size_t index_of(std::string_view name) const;  // throws UnknownState

  bool is_deterministic() const;
  /// The deterministic problem when every distribution is a Dirac mass.
  std::optional<Problem> as_problem() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<FiniteDistribution>> transitions_;
  std::vector<double> rewards_;
};

/// r(u) = sum_x u(x) r(x). Throws UnknownState when u leaves X.
double extend_reward(const GamblingHouse& g, const FiniteDistribution& u);

/// v_theta on every state of the house:
///   V_t(x) = max_{u in F(x)} sum_{x'} u(x') (theta_t r(x') + V_{t+1}(x')).
/// `error` carries the tail mass of the materialized evaluation.
struct HouseValues {
  std::vector<double> values;
  double error = 0.0;
};

HouseValues gh_value_function(const GamblingHouse& g, const Evaluation& theta,
                              const EngineOptions& opts = {});
ValueBound gh_value(const GamblingHouse& g, const Evaluation& theta, std::size_t x,
                    const EngineOptions& opts = {});

/// Value of the mixed initial state u in the deterministic problem on
/// distributions: plays (u_1, u_2, ...) with u_{t+1} = sum_x u_t(x) f_t(x),
/// f_t(x) in F(x), are enumerated literally and the best theta-payoff kept.
/// Exponential; throws ExplosionGuard past `leaf_budget` plays and
/// SupportExceedsHorizon for infinite-support evaluations.
double mixed_value_by_enumeration(const GamblingHouse& g, const Evaluation& theta,
                                  const FiniteDistribution& u, std::size_t leaf_budget = 50'000'000);

struct AffinityReport {
  double mixed = 0.0;   // by enumeration over plays from u
  double affine = 0.0;  // sum_x u(x) v_theta(x)
  double difference = 0.0;
  double tolerance = 1e-9;
  bool holds = false;
};

AffinityReport affinity_check(const GamblingHouse& g, const Evaluation& theta,
                              const FiniteDistribution& u, const EngineOptions& opts = {});

/// sup over mixed states u of |v~_theta(u) - v~_theta'(u)| versus
/// sup_x |v_theta(x) - v_theta'(x)|: the sampled u never exceed the vertex
/// supremum, and the vertex attaining it reproduces it by enumeration.
struct DistanceReport {
  double vertex_sup = 0.0;
  double sampled_sup = 0.0;
  double witness = 0.0;  // |difference| recomputed by enumeration at the argmax vertex
  std::size_t witness_state = 0;
  bool holds = false;
};

DistanceReport distance_preservation_check(const GamblingHouse& g, const Evaluation& theta,
                                           const Evaluation& theta_prime,
                                           const std::vector<FiniteDistribution>& samples,
                                           const EngineOptions& opts = {});

/// States reachable from x through the supports of available distributions.
std::set<std::size_t> support_closure(const GamblingHouse& g, std::size_t x);

/// sup_m v_{m,theta}(x) on a house. `lower` is max_{m <= m_max} of
/// (B^m v_theta)(x) with B w(x) = max_{u in F(x)} sum u(x') w(x'); `upper` is
/// the max of v_theta over support_closure(x). They coincide on deterministic
/// houses; for genuinely random transitions the upper bound can be strict.
struct DelayedSup {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> exact;
};

DelayedSup house_delayed_sup(const GamblingHouse& g, const Evaluation& theta, std::size_t m_max,
                             const EngineOptions& opts = {});

struct HouseVStar {
  std::vector<double> lower;  // min_k of DelayedSup::lower
  std::vector<double> upper;  // min_k of DelayedSup::upper
  std::vector<std::int64_t> witness_k;
  FamilyDiagnostics family;
};

/// inf_k sup_m v_{m,theta^k}(x) for every state of the house.
HouseVStar gh_v_star(const GamblingHouse& g, const Family& family, std::size_t m_max,
                     const EngineOptions& opts = {});

}  // namespace dplimit
