#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dplimit/evaluation.hpp"
#include "dplimit/family.hpp"
#include "dplimit/state_space.hpp"

namespace dplimit {

struct EngineOptions {
  // Mass of a discounted evaluation allowed beyond its materialized prefix.
  double tail_tol = 1e-9;
  // Sup-norm distance guaranteed by value_discounted_fixpoint.
  double fixpoint_tol = 1e-9;
  // A family is accepted as TV-vanishing once its smallest TV is at most this.
  double vstar_tv_threshold = 1e-2;
};

/// A value known up to truncation: the exact quantity lies in
/// [value, value + error] because rewards are in [0, 1].
struct ValueBound {
  double value = 0.0;
  double error = 0.0;
};

/// Values over a finite set of states, all computed under one evaluation.
struct ValueFunction {
  std::vector<State> states;
  std::vector<double> values;
  std::string evaluation;
  double error = 0.0;

  double at(const State& z) const;
};

/// Sup distance between two value functions over their common states.
double sup_distance(const ValueFunction& a, const ValueFunction& b);

/// theta-payoff of a play prefix; error is the mass of theta beyond it.
ValueBound payoff(const Problem& p, const Play& s, const Evaluation& theta);

/// v_theta(z) by finite-horizon backward induction over the materialized
/// support of theta:
///   V_{T+1} = 0,  V_t(x) = max_{y in F(x)} theta_t r(y) + V_{t+1}(y).
/// Throws CapExceeded when the support exceeds a generated problem's depth cap.
ValueBound value(const Problem& p, const Evaluation& theta, const State& z,
                 const EngineOptions& opts = {});

/// v_theta at several origins with a single shared induction.
std::vector<ValueBound> values(const Problem& p, const Evaluation& theta,
                               std::span<const State> origins, const EngineOptions& opts = {});

/// v_theta on every state of a finite problem.
ValueFunction value_function(const Problem& p, const Evaluation& theta,
                             const EngineOptions& opts = {});

/// Iterates v <- [z -> max_{z'} lambda r(z') + (1 - lambda) v(z')] from v = 0
/// until the sup-norm step is at most tol * lambda, which puts the iterate
/// within tol of the fixed point v_lambda. Finite problems only.
ValueFunction value_discounted_fixpoint(const Problem& p, double lambda, double tol);

/// v_{m,theta}(z) = max over F^m(z) of v_theta.
ValueBound delayed_value(const Problem& p, const Evaluation& theta, std::size_t m,
                         const State& z, const EngineOptions& opts = {});

// ---------------------------------------------------------------------------
// Limit value v* = inf_theta sup_m v_{m,theta}.

struct VStarEstimate {
  State state;
  double value = 0.0;
  double error = 0.0;
  std::int64_t witness_k = 0;  // family label attaining the inf
  State witness_state;         // state of the closure attaining the sup
  // sup over delays was taken over the full closure G^infinity(z).
  bool sup_exact = false;
};

struct VStarReport {
  std::vector<VStarEstimate> estimates;
  FamilyDiagnostics family;
};

/// min over the family of max over G^infinity(z) of v_{theta^k}. Exact
/// inf-sup over the given family; an upper bound on v* in general, and v*
/// itself in the limit of a TV-vanishing family. An empty `states` means
/// every state. Finite problems only.
VStarReport v_star_finite(const Problem& p, std::span<const State> states, const Family& family,
                          const EngineOptions& opts = {});

/// Same formula with sup over delays m <= m_max, i.e. max over G^{m_max}(z).
/// Works on generated problems; sup_exact reports whether G^{m_max}(z) is
/// already closed.
VStarReport v_star_truncated(const Problem& p, std::span<const State> states, const Family& family,
                             std::size_t m_max, const EngineOptions& opts = {});

// ---------------------------------------------------------------------------
// Checks.

struct Lemma1Report {
  double bound = 0.0;          // theta_1 + sum_{t>=2} |theta_t - theta_{t-1}|
  double max_gap = 0.0;        // max_z |v(z) - max_{F(z)} v|
  double max_violation = 0.0;  // max_z (gap - bound), may be negative
  double budget = 0.0;
  State worst_state;
  bool holds = false;
};

Lemma1Report lemma1_check(const Problem& p, const Evaluation& theta, const EngineOptions& opts = {});

struct ConsistencyReport {
  double max_violation = 0.0;
  double budget = 0.0;
  State worst_state;
  bool holds = false;
};

/// v_theta(z) = max_{z'} theta_1 r(z') + (1 - theta_1) v_{theta+}(z').
ConsistencyReport bellman_check(const Problem& p, const Evaluation& theta,
                                const EngineOptions& opts = {});

/// Residual of the discounted fixpoint (budget 2 tol) and its agreement with
/// backward induction on discounted(lambda) (budget tol + tail).
struct FixpointReport {
  double residual = 0.0;
  double residual_budget = 0.0;
  double agreement = 0.0;
  double agreement_budget = 0.0;
  bool holds = false;
};

FixpointReport fixpoint_check(const Problem& p, double lambda, const EngineOptions& opts = {});

/// delayed_value(theta, m) against value(delay(theta, m)) on every state.
ConsistencyReport delay_identity_check(const Problem& p, const Evaluation& theta, std::size_t m,
                                       const EngineOptions& opts = {});

/// The chain
///   inf_k sup_{m<=m0} v_{m,k}(z) <= liminf_k v_k(z) <= limsup_k v_k(z)
///     <= inf_k sup_m v_{m,k}(z)
/// with liminf/limsup replaced by min/max over the second half of the family.
///
/// The first link is allowed slack 2 m0 max_tail TV (the iterated one-step
/// bound). The last link is checked against the block bound
///   v_{theta^k}(z) <= beta_j / (1 - eps_j) + (T0_j - 1) / T1 + T1 TV(theta^k)
/// minimized over the members j and block lengths T1, where beta_j is the
/// closure sup of v_{theta^j}, T0_j its materialized support and eps_j its
/// tail mass. Both slacks vanish with the family's TV.
struct SandwichReport {
  double inf_sup_bounded = 0.0;  // inf_k sup_{m<=m0}
  double liminf = 0.0;
  double limsup = 0.0;
  double inf_sup = 0.0;          // inf_k sup_m
  double eps_lower = 0.0;
  double eps_upper = 0.0;
  double budget = 0.0;
  std::size_t tail_start = 0;    // index of the first member in the tail
  std::vector<double> sequence;  // v_{theta^k}(z) for every member
  bool holds = false;
};

SandwichReport sandwich_check(const Problem& p, const State& z, const Family& family,
                              std::size_t m0, const EngineOptions& opts = {});

/// For uncontrolled finite problems: |v_theta(z0) - v*(z0)| <= N TV(theta) + eps,
/// with eps = max_z |vbar_N(z) - v*(z)| measured and v* taken from
/// v_star_finite over `vstar_family` (a Cesaro family).
struct UncontrolledReport {
  double vstar = 0.0;
  double epsilon = 0.0;
  double gap = 0.0;  // worst case over the value's error interval
  double bound = 0.0;
  double budget = 1e-9;
  bool holds = false;
};

UncontrolledReport uncontrolled_bound_check(const Problem& p, const Evaluation& theta, std::size_t N,
                                            const State& z0, const Family& vstar_family,
                                            const EngineOptions& opts = {});

/// Default Cesaro family used as v* reference: cesaro(1..max(128, 8|Z|)).
Family default_vstar_family(const Problem& p);

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepRow {
  std::string family;
  std::int64_t k = 0;
  double tv = 0.0;
  State state;
  double value = 0.0;
  double error = 0.0;
  double dist_to_vstar = 0.0;
};

struct SweepSummary {
  std::string family;
  std::vector<std::int64_t> ks;
  std::vector<double> tv;
  std::vector<double> sup_weight;
  std::vector<double> dist_to_vstar;  // per k, sup over the swept states
  std::vector<double> sup_value;      // per k, sup over the swept states
  std::vector<double> cauchy_gap;     // d(v_k, v_{k+1}) over the swept states
  double tail_cauchy = 0.0;           // max gap over the second half
  bool tv_vanishing = false;
  bool oscillating = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // family order, then k ascending, then state order
  std::vector<SweepSummary> summaries;
};

struct SweepOptions {
  EngineOptions engine;
  double cauchy_tol = 0.1;  // tail Cauchy gap above this flags oscillation
};

/// Values of every family member at every state, compared with the given v*
/// reference (same order as `states`).
SweepResult convergence_sweep(const Problem& p, const std::vector<NamedFamily>& families,
                              std::span<const State> states, std::span<const double> vstar,
                              const SweepOptions& opts = {});

}  // namespace dplimit
