#include "dplimit/value_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "dplimit/errors.hpp"

namespace dplimit {

namespace {

constexpr double kNumericSlack = 1e-9;

// Breadth-first expansion from a set of origins. Nodes are stored in order of
// their minimal depth; successor lists exist for nodes shallower than the
// horizon, which is all the induction below ever reads.
struct Expansion {
  std::vector<State> nodes;
  std::vector<double> reward;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<std::size_t> layer_end;  // layer_end[d]: #nodes with depth <= d
  std::vector<std::uint32_t> origin_index;
};

Expansion expand(const Problem& p, std::span<const State> origins, std::size_t horizon) {
  Expansion e;
  std::unordered_map<State, std::uint32_t, StateHash> index;
  auto intern = [&](const State& s) {
    auto [it, inserted] = index.emplace(s, static_cast<std::uint32_t>(e.nodes.size()));
    if (inserted) {
      e.nodes.push_back(s);
      e.reward.push_back(p.reward(s));
    }
    return it->second;
  };
  for (const State& z : origins) {
    if (!p.contains(z)) throw UnknownState("unknown state '" + std::to_string(z.a) + "'");
    e.origin_index.push_back(intern(z));
  }
  e.layer_end.push_back(e.nodes.size());
  std::size_t begin = 0;
  for (std::size_t d = 0; d < horizon; ++d) {
    const std::size_t end = e.nodes.size();
    e.succ.resize(end);
    for (std::size_t i = begin; i < end; ++i) {
      const std::vector<State> next = p.successors(e.nodes[i]);
      auto& out = e.succ[i];
      out.reserve(next.size());
      for (const State& y : next) out.push_back(intern(y));
    }
    e.layer_end.push_back(e.nodes.size());
    begin = end;
    if (begin == e.nodes.size()) break;  // closed under F
  }
  e.layer_end.resize(horizon + 1, e.nodes.size());
  return e;
}

// V_1 on every node of the expansion.
std::vector<double> induct(const Expansion& e, const std::vector<double>& w) {
  const std::size_t n = e.nodes.size();
  std::vector<double> next(n, 0.0);
  std::vector<double> cur(n, 0.0);
  for (std::size_t t = w.size(); t >= 1; --t) {
    const double wt = w[t - 1];
    const std::size_t limit = e.layer_end[t - 1];
    for (std::size_t i = 0; i < limit; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::uint32_t j : e.succ[i]) best = std::max(best, wt * e.reward[j] + next[j]);
      cur[i] = best;
    }
    std::swap(cur, next);
  }
  return next;
}

double max_over(const ValueFunction& vf, const StateSet& set, State* argmax) {
  double best = -std::numeric_limits<double>::infinity();
  for (const State& s : set) {
    const double v = vf.at(s);
    if (v > best) {
      best = v;
      if (argmax) *argmax = s;
    }
  }
  return best;
}

double max_successor_value(const Problem& p, const ValueFunction& vf, const State& z) {
  double best = -std::numeric_limits<double>::infinity();
  for (const State& y : p.successors(z)) best = std::max(best, vf.at(y));
  return best;
}

// Smallest (T0 - 1) / T1 + T1 tv over integer block lengths T1 >= 1.
double block_slack(std::size_t support, double tv) {
  if (support <= 1) return tv;
  const double a = static_cast<double>(support - 1);
  const double x = std::sqrt(a / tv);
  double best = a + tv;  // T1 = 1
  for (double t1 : {std::floor(x), std::ceil(x)})
    if (t1 >= 1.0) best = std::min(best, a / t1 + t1 * tv);
  return best;
}

std::vector<State> all_or(const Problem& p, std::span<const State> states) {
  if (!states.empty()) return {states.begin(), states.end()};
  return p.states();
}

}  // namespace

double ValueFunction::at(const State& z) const {
  if (z.b == 0 && z.a >= 0 && static_cast<std::size_t>(z.a) < states.size() &&
      states[static_cast<std::size_t>(z.a)] == z)
    return values[static_cast<std::size_t>(z.a)];
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == z) return values[i];
  throw UnknownState("state not covered by value function");
}

double sup_distance(const ValueFunction& a, const ValueFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    d = std::max(d, std::abs(a.values[i] - b.at(a.states[i])));
  return d;
}

ValueBound payoff(const Problem& p, const Play& s, const Evaluation& theta) {
  ValueBound out;
  const auto& prefix = s.prefix();
  for (std::size_t t = prefix.size(); t >= 1; --t)
    out.value = theta.weight(static_cast<std::int64_t>(t)) * p.reward(prefix[t - 1]) + out.value;
  out.error = mass_after(theta, static_cast<std::int64_t>(prefix.size()));
  return out;
}

std::vector<ValueBound> values(const Problem& p, const Evaluation& theta,
                               std::span<const State> origins, const EngineOptions& opts) {
  const Materialized m = materialize(theta, opts.tail_tol);
  p.check_horizon(m.weights.size());
  const Expansion e = expand(p, origins, m.weights.size());
  const std::vector<double> v = induct(e, m.weights);
  std::vector<ValueBound> out;
  out.reserve(origins.size());
  for (std::uint32_t i : e.origin_index) out.push_back({v[i], m.tail_mass});
  return out;
}

ValueBound value(const Problem& p, const Evaluation& theta, const State& z,
                 const EngineOptions& opts) {
  const State origin[] = {z};
  return values(p, theta, origin, opts).front();
}

ValueFunction value_function(const Problem& p, const Evaluation& theta, const EngineOptions& opts) {
  ValueFunction vf;
  vf.states = p.states();
  vf.evaluation = theta.describe();
  const auto bounds = values(p, theta, vf.states, opts);
  vf.values.reserve(bounds.size());
  for (const auto& b : bounds) vf.values.push_back(b.value);
  vf.error = bounds.empty() ? 0.0 : bounds.front().error;
  return vf;
}

ValueFunction value_discounted_fixpoint(const Problem& p, double lambda, double tol) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidEvaluation("lambda must lie in (0, 1]");
  if (!(tol > 0.0)) throw InvalidEvaluation("fixpoint tolerance must be positive");
  const FiniteGraph& g = p.graph();
  const std::size_t n = g.names.size();
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);
  for (;;) {
    double step = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t y : g.successors[z])
        best = std::max(best, lambda * g.rewards[y] + (1.0 - lambda) * v[y]);
      next[z] = best;
      step = std::max(step, std::abs(best - v[z]));
    }
    std::swap(v, next);
    if (step <= tol * lambda) break;
  }
  ValueFunction vf;
  vf.states = p.states();
  vf.values = std::move(v);
  vf.evaluation = Evaluation::discounted(lambda).describe();
  vf.error = tol;
  return vf;
}

ValueBound delayed_value(const Problem& p, const Evaluation& theta, std::size_t m, const State& z,
                         const EngineOptions& opts) {
  const Materialized mat = materialize(theta, opts.tail_tol);
  p.check_horizon(m + mat.weights.size());
  const StateSet reach = reach_exact(p, z, m);
  const std::vector<State> targets(reach.begin(), reach.end());
  ValueBound best{-std::numeric_limits<double>::infinity(), 0.0};
  for (const ValueBound& b : values(p, theta, targets, opts)) {
    if (b.value > best.value) best.value = b.value;
    best.error = std::max(best.error, b.error);
  }
  return best;
}

VStarReport v_star_finite(const Problem& p, std::span<const State> states, const Family& family,
                          const EngineOptions& opts) {
  if (family.empty()) throw InvalidFamily("v* needs a nonempty family");
  VStarReport report;
  report.family = diagnose_family(family, opts.vstar_tv_threshold);
  const std::vector<State> targets = all_or(p, states);
  std::vector<StateSet> closures;
  closures.reserve(targets.size());
  for (const State& z : targets) closures.push_back(reach_closure(p, z).states);

  report.estimates.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    report.estimates[i].state = targets[i];
    report.estimates[i].value = std::numeric_limits<double>::infinity();
    report.estimates[i].sup_exact = true;
  }
  for (const FamilyMember& member : family) {
    const ValueFunction vf = value_function(p, member.eval, opts);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      State arg;
      const double sup = max_over(vf, closures[i], &arg);
      VStarEstimate& est = report.estimates[i];
      if (sup < est.value) {
        est.value = sup;
        est.witness_k = member.k;
        est.witness_state = arg;
      }
      est.error = std::max(est.error, vf.error);
    }
  }
  return report;
}

VStarReport v_star_truncated(const Problem& p, std::span<const State> states, const Family& family,
                             std::size_t m_max, const EngineOptions& opts) {
  if (family.empty()) throw InvalidFamily("v* needs a nonempty family");
  if (states.empty() && !p.is_finite())
    throw InvalidInstance("generated problems need explicit query states");
  VStarReport report;
  report.family = diagnose_family(family, opts.vstar_tv_threshold);
  const std::vector<State> targets = all_or(p, states);

  std::size_t longest = 0;
  for (const FamilyMember& member : family)
    longest = std::max(longest, materialize(member.eval, opts.tail_tol).weights.size());
  p.check_horizon(m_max + longest);

  std::vector<StateSet> reach;
  StateSet pooled;
  report.estimates.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    reach.push_back(reach_within(p, targets[i], m_max));
    pooled.insert(reach.back().begin(), reach.back().end());
    bool closed = true;
    for (const State& x : reach.back()) {
      try {
        for (const State& y : p.successors(x)) closed = closed && reach.back().count(y) > 0;
      } catch (const CapExceeded&) {
        closed = false;
      }
      if (!closed) break;
    }
    report.estimates[i].state = targets[i];
    report.estimates[i].value = std::numeric_limits<double>::infinity();
    report.estimates[i].sup_exact = closed;
  }

  const std::vector<State> pool(pooled.begin(), pooled.end());
  for (const FamilyMember& member : family) {
    const auto bounds = values(p, member.eval, pool, opts);
    ValueFunction vf;
    vf.states = pool;
    for (const auto& b : bounds) vf.values.push_back(b.value);
    vf.error = bounds.empty() ? 0.0 : bounds.front().error;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      State arg;
      const double sup = max_over(vf, reach[i], &arg);
      VStarEstimate& est = report.estimates[i];
      if (sup < est.value) {
        est.value = sup;
        est.witness_k = member.k;
        est.witness_state = arg;
      }
      est.error = std::max(est.error, vf.error);
    }
  }
  return report;
}

Lemma1Report lemma1_check(const Problem& p, const Evaluation& theta, const EngineOptions& opts) {
  const ValueFunction vf = value_function(p, theta, opts);
  Lemma1Report r;
  r.bound = theta.first() + total_variation(theta);
  r.budget = 2.0 * opts.tail_tol + kNumericSlack;
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vf.states.size(); ++i) {
    const double gap = std::abs(vf.values[i] - max_successor_value(p, vf, vf.states[i]));
    r.max_gap = std::max(r.max_gap, gap);
    if (gap - r.bound > r.max_violation) {
      r.max_violation = gap - r.bound;
      r.worst_state = vf.states[i];
    }
  }
  r.holds = r.max_violation <= r.budget;
  return r;
}

ConsistencyReport bellman_check(const Problem& p, const Evaluation& theta,
                                const EngineOptions& opts) {
  const Evaluation next = shift(theta);
  const double first = theta.first();
  const ValueFunction v = value_function(p, theta, opts);
  const ValueFunction v_next = value_function(p, next, opts);
  const FiniteGraph& g = p.graph();
  ConsistencyReport r;
  r.budget = 2.0 * opts.tail_tol + kNumericSlack;
  for (std::size_t z = 0; z < g.names.size(); ++z) {
    double rhs = -std::numeric_limits<double>::infinity();
    for (std::size_t y : g.successors[z])
      rhs = std::max(rhs, first * g.rewards[y] + (1.0 - first) * v_next.values[y]);
    const double violation = std::abs(v.values[z] - rhs);
    if (violation >= r.max_violation) {
      r.max_violation = violation;
      r.worst_state = Problem::finite_state(z);
    }
  }
  r.holds = r.max_violation <= r.budget;
  return r;
}

FixpointReport fixpoint_check(const Problem& p, double lambda, const EngineOptions& opts) {
  const ValueFunction fix = value_discounted_fixpoint(p, lambda, opts.fixpoint_tol);
  const ValueFunction induction = value_function(p, Evaluation::discounted(lambda), opts);
  const FiniteGraph& g = p.graph();
  FixpointReport r;
  for (std::size_t z = 0; z < g.names.size(); ++z) {
    double rhs = -std::numeric_limits<double>::infinity();
    for (std::size_t y : g.successors[z])
      rhs = std::max(rhs, lambda * g.rewards[y] + (1.0 - lambda) * fix.values[y]);
    r.residual = std::max(r.residual, std::abs(fix.values[z] - rhs));
  }
  r.agreement = sup_distance(fix, induction);
  r.residual_budget = 2.0 * opts.fixpoint_tol;
  r.agreement_budget = opts.fixpoint_tol + induction.error + 1e-12;
  r.holds = r.residual <= r.residual_budget && r.agreement <= r.agreement_budget;
  return r;
}

ConsistencyReport delay_identity_check(const Problem& p, const Evaluation& theta, std::size_t m,
                                       const EngineOptions& opts) {
  const Evaluation delayed = delay(theta, static_cast<std::int64_t>(m));
  const ValueFunction direct = value_function(p, delayed, opts);
  ConsistencyReport r;
  for (const State& z : p.states()) {
    const ValueBound via_reach = delayed_value(p, theta, m, z, opts);
    const double violation = std::abs(via_reach.value - direct.at(z));
    r.budget = std::max(r.budget, via_reach.error + direct.error + 1e-12);
    if (violation >= r.max_violation) {
      r.max_violation = violation;
      r.worst_state = z;
    }
  }
  r.holds = r.max_violation <= r.budget;
  return r;
}

SandwichReport sandwich_check(const Problem& p, const State& z, const Family& family,
                              std::size_t m0, const EngineOptions& opts) {
  if (family.empty()) throw InvalidFamily("sandwich check needs a nonempty family");
  const StateSet bounded = reach_within(p, z, m0);
  const StateSet closure = reach_closure(p, z).states;
  const std::size_t count = family.size();

  std::vector<double> sup_bounded(count), sup_all(count), err(count), tv(count), tail(count);
  std::vector<std::size_t> support(count);
  SandwichReport r;
  r.sequence.resize(count);
  double max_err = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const Evaluation& theta = family[k].eval;
    const ValueFunction vf = value_function(p, theta, opts);
    const Materialized mat = materialize(theta, opts.tail_tol);
    sup_bounded[k] = max_over(vf, bounded, nullptr);
    sup_all[k] = max_over(vf, closure, nullptr);
    r.sequence[k] = vf.at(z);
    err[k] = vf.error;
    tv[k] = total_variation(theta);
    support[k] = mat.weights.size();
    tail[k] = mat.tail_mass;
    max_err = std::max(max_err, vf.error);
  }
  r.tail_start = count / 2;
  r.inf_sup_bounded = *std::min_element(sup_bounded.begin(), sup_bounded.end());
  r.inf_sup = *std::min_element(sup_all.begin(), sup_all.end());
  r.liminf = *std::min_element(r.sequence.begin() + static_cast<std::ptrdiff_t>(r.tail_start),
                               r.sequence.end());
  r.limsup = *std::max_element(r.sequence.begin() + static_cast<std::ptrdiff_t>(r.tail_start),
                               r.sequence.end());
  const double max_tail_tv =
      *std::max_element(tv.begin() + static_cast<std::ptrdiff_t>(r.tail_start), tv.end());
  r.eps_lower = 2.0 * static_cast<double>(m0) * max_tail_tv;
  r.budget = 2.0 * max_err + kNumericSlack;

  bool upper_ok = true;
  for (std::size_t k = r.tail_start; k < count; ++k) {
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j)
      bound = std::min(bound, (sup_all[j] + err[j]) / (1.0 - tail[j]) + block_slack(support[j], tv[k]));
    r.eps_upper = std::max(r.eps_upper, bound - r.inf_sup);
    upper_ok = upper_ok && r.sequence[k] <= bound + r.budget;
  }
  r.holds = r.inf_sup_bounded <= r.liminf + r.eps_lower + r.budget && r.liminf <= r.limsup && upper_ok;
  return r;
}

Family default_vstar_family(const Problem& p) {
  const auto upto = static_cast<std::int64_t>(std::max<std::size_t>(128, 8 * p.size()));
  Family f;
  for (std::int64_t n = 1; n <= upto; ++n) f.push_back({n, Evaluation::cesaro(n)});
  return f;
}

UncontrolledReport uncontrolled_bound_check(const Problem& p, const Evaluation& theta, std::size_t N,
                                            const State& z0, const Family& vstar_family,
                                            const EngineOptions& opts) {
  if (!p.is_uncontrolled()) throw NotUncontrolled("some state has more than one successor");
  if (N == 0) throw InvalidEvaluation("block length N must be positive");
  const VStarReport vs = v_star_finite(p, {}, vstar_family, opts);
  const ValueFunction cesaro_n = value_function(p, Evaluation::cesaro(static_cast<std::int64_t>(N)), opts);
  UncontrolledReport r;
  for (const VStarEstimate& est : vs.estimates) {
    r.epsilon = std::max(r.epsilon, std::abs(cesaro_n.at(est.state) - est.value) + est.error);
    if (est.state == z0) r.vstar = est.value;
  }
  const ValueBound v = value(p, theta, z0, opts);
  r.gap = std::max(std::abs(v.value - r.vstar), std::abs(v.value + v.error - r.vstar));
  r.bound = static_cast<double>(N) * total_variation(theta) + r.epsilon;
  r.holds = r.gap <= r.bound + r.budget;
  return r;
}

SweepResult convergence_sweep(const Problem& p, const std::vector<NamedFamily>& families,
                              std::span<const State> states, std::span<const double> vstar,
                              const SweepOptions& opts) {
  if (vstar.size() != states.size()) throw InvalidInstance("v* reference must cover every swept state");
  SweepResult result;
  for (const NamedFamily& fam : families) {
    SweepSummary s;
    s.family = fam.name;
    const FamilyDiagnostics diag = diagnose_family(fam.members, opts.engine.vstar_tv_threshold);
    s.tv_vanishing = !diag.impatient;
    std::vector<double> previous;
    for (const FamilyMember& member : fam.members) {
      const auto bounds = values(p, member.eval, states, opts.engine);
      const double tv = total_variation(member.eval);
      double dist = 0.0, sup_value = 0.0, gap = 0.0;
      std::vector<double> current;
      current.reserve(bounds.size());
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double d = std::abs(bounds[i].value - vstar[i]);
        result.rows.push_back({fam.name, member.k, tv, states[i], bounds[i].value, bounds[i].error, d});
        dist = std::max(dist, d);
        sup_value = std::max(sup_value, bounds[i].value);
        if (!previous.empty()) gap = std::max(gap, std::abs(bounds[i].value - previous[i]));
        current.push_back(bounds[i].value);
      }
      if (!previous.empty()) s.cauchy_gap.push_back(gap);
      previous = std::move(current);
      s.ks.push_back(member.k);
      s.tv.push_back(tv);
      s.sup_weight.push_back(member.eval.sup_weight());
      s.dist_to_vstar.push_back(dist);
      s.sup_value.push_back(sup_value);
    }
    const std::size_t half = s.cauchy_gap.size() / 2;
    for (std::size_t i = half; i < s.cauchy_gap.size(); ++i)
      s.tail_cauchy = std::max(s.tail_cauchy, s.cauchy_gap[i]);
    s.oscillating = s.tail_cauchy > opts.cauchy_tol;
    result.summaries.push_back(std::move(s));
  }
  return result;
}

}  // namespace dplimit
