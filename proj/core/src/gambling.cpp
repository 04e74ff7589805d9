#include "dplimit/gambling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "dplimit/errors.hpp"

namespace dplimit {

FiniteDistribution::FiniteDistribution(std::vector<std::pair<std::size_t, double>> entries) {
  std::sort(entries.begin(), entries.end());
  double total = 0.0;
  for (const auto& [x, p] : entries) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidInstance("distribution has negative mass");
    total += p;
    if (p == 0.0) continue;
    if (!entries_.empty() && entries_.back().first == x)
      entries_.back().second += p;
    else
      entries_.emplace_back(x, p);
  }
  if (entries_.empty() || std::abs(total - 1.0) > 1e-12)
    throw InvalidInstance("distribution does not sum to 1");
}

FiniteDistribution FiniteDistribution::dirac(std::size_t x) { return FiniteDistribution({{x, 1.0}}); }

FiniteDistribution FiniteDistribution::uniform(const std::vector<std::size_t>& states) {
  std::vector<std::pair<std::size_t, double>> e;
  for (std::size_t x : states) e.emplace_back(x, 1.0 / static_cast<double>(states.size()));
  return FiniteDistribution(std::move(e));
}

double FiniteDistribution::probability(std::size_t x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(x, 0.0));
  return it != entries_.end() && it->first == x ? it->second : 0.0;
}

GamblingHouse GamblingHouse::make(std::vector<std::string> names,
                                  std::vector<std::vector<FiniteDistribution>> transitions,
                                  std::vector<double> rewards) {
  const std::size_t n = names.size();
  if (n == 0) throw InvalidInstance("house has no states");
  if (transitions.size() != n || rewards.size() != n)
    throw InvalidInstance("transition and reward tables must list every state");
  std::unordered_set<std::string> seen;
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen.insert(names[x]).second) throw InvalidInstance("duplicate state name '" + names[x] + "'");
    if (transitions[x].empty()) throw InvalidInstance("state '" + names[x] + "' has no transition");
    for (const auto& u : transitions[x])
      for (const auto& [y, p] : u.entries())
        if (y >= n) throw InvalidInstance("distribution support leaves the house at '" + names[x] + "'");
    if (!(rewards[x] >= 0.0 && rewards[x] <= 1.0))
      throw InvalidInstance("reward of '" + names[x] + "' is outside [0, 1]");
  }
  GamblingHouse g;
  g.names_ = std::move(names);
  g.transitions_ = std::move(transitions);
  g.rewards_ = std::move(rewards);
  return g;
}

GamblingHouse GamblingHouse::from_problem(const Problem& p) {
  const FiniteGraph& graph = p.graph();
  std::vector<std::vector<FiniteDistribution>> transitions(graph.names.size());
  for (std::size_t x = 0; x < graph.names.size(); ++x)
    for (std::size_t y : graph.successors[x]) transitions[x].push_back(FiniteDistribution::dirac(y));
  return make(graph.names, std::move(transitions), graph.rewards);
}

std::size_t GamblingHouse::index_of(std::string_view name) const {
  for (std::size_t x = 0; x < names_.size(); ++x)
    if (names_[x] == name) return x;
  throw UnknownState("unknown state '" + std::string(name) + "'");
}

bool GamblingHouse::is_deterministic() const {
  for (const auto& list : transitions_)
    for (const auto& u : list)
      if (!u.is_dirac()) return false;
  return true;
}

std::optional<Problem> GamblingHouse::as_problem() const {
  if (!is_deterministic()) return std::nullopt;
  FiniteGraph graph{names_, {}, rewards_};
  graph.successors.resize(size());
  for (std::size_t x = 0; x < size(); ++x)
    for (const auto& u : transitions_[x]) graph.successors[x].push_back(u.entries().front().first);
  return Problem::finite(std::move(graph));
}

double extend_reward(const GamblingHouse& g, const FiniteDistribution& u) {
  double r = 0.0;
  for (const auto& [x, p] : u.entries()) {
    if (x >= g.size()) throw UnknownState("distribution support leaves the house");
    r += p * g.reward(x);
  }
  return r;
}

HouseValues gh_value_function(const GamblingHouse& g, const Evaluation& theta,
                              const EngineOptions& opts) {
  const Materialized m = materialize(theta, opts.tail_tol);
  const std::size_t n = g.size();
  std::vector<double> next(n, 0.0), cur(n, 0.0);
  for (std::size_t t = m.weights.size(); t >= 1; --t) {
    const double wt = m.weights[t - 1];
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& u : g.transitions(x)) {
        double v = 0.0;
        for (const auto& [y, p] : u.entries()) v += p * (wt * g.reward(y) + next[y]);
        best = std::max(best, v);
      }
      cur[x] = best;
    }
    std::swap(cur, next);
  }
  return {std::move(next), m.tail_mass};
}

ValueBound gh_value(const GamblingHouse& g, const Evaluation& theta, std::size_t x,
                    const EngineOptions& opts) {
  if (x >= g.size()) throw UnknownState("unknown house state");
  const HouseValues hv = gh_value_function(g, theta, opts);
  return {hv.values[x], hv.error};
}

namespace {

struct Enumerator {
  const GamblingHouse& g;
  const std::vector<double>& w;
  std::size_t budget;
  std::size_t leaves = 0;
  double best = -std::numeric_limits<double>::infinity();

  // u is dense over X; `stage` is the index of the next distribution to pick.
  void play(const std::vector<double>& u, std::size_t stage, double acc) {
    if (stage == w.size()) {
      if (++leaves > budget) throw ExplosionGuard("mixed-state enumeration exceeded its play budget");
      best = std::max(best, acc);
      return;
    }
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < u.size(); ++x)
      if (u[x] > 0.0) support.push_back(x);
    // Odometer over the selections f(x) in F(x), x in the support.
    std::vector<std::size_t> choice(support.size(), 0);
    std::vector<double> next(u.size());
    for (;;) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < support.size(); ++i) {
        const std::size_t x = support[i];
        for (const auto& [y, p] : g.transitions(x)[choice[i]].entries()) next[y] += u[x] * p;
      }
      double r = 0.0;
      for (std::size_t y = 0; y < next.size(); ++y) r += next[y] * g.reward(y);
      play(next, stage + 1, acc + w[stage] * r);

      std::size_t i = 0;
      while (i < support.size() && ++choice[i] == g.transitions(support[i]).size()) choice[i++] = 0;
      if (i == support.size()) break;
    }
  }
};

}  // namespace

double mixed_value_by_enumeration(const GamblingHouse& g, const Evaluation& theta,
                                  const FiniteDistribution& u, std::size_t leaf_budget) {
  const auto support = theta.support();
  if (!support) throw SupportExceedsHorizon("enumeration needs a finitely supported evaluation");
  const Materialized m = materialize(theta, 1.0);
  std::vector<double> dense(g.size(), 0.0);
  for (const auto& [x, p] : u.entries()) {
    if (x >= g.size()) throw UnknownState("distribution support leaves the house");
    dense[x] = p;
  }
  Enumerator e{g, m.weights, leaf_budget};
  e.play(dense, 0, 0.0);
  return e.best;
}

AffinityReport affinity_check(const GamblingHouse& g, const Evaluation& theta,
                              const FiniteDistribution& u, const EngineOptions& opts) {
  const HouseValues hv = gh_value_function(g, theta, opts);
  AffinityReport r;
  r.mixed = mixed_value_by_enumeration(g, theta, u);
  for (const auto& [x, p] : u.entries()) r.affine += p * hv.values[x];
  r.difference = std::abs(r.mixed - r.affine);
  r.holds = r.difference <= r.tolerance;
  return r;
}

DistanceReport distance_preservation_check(const GamblingHouse& g, const Evaluation& theta,
                                           const Evaluation& theta_prime,
                                           const std::vector<FiniteDistribution>& samples,
                                           const EngineOptions& opts) {
  const HouseValues a = gh_value_function(g, theta, opts);
  const HouseValues b = gh_value_function(g, theta_prime, opts);
  DistanceReport r;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double d = std::abs(a.values[x] - b.values[x]);
    if (d > r.vertex_sup) {
      r.vertex_sup = d;
      r.witness_state = x;
    }
  }
  for (const auto& u : samples) {
    const double d = std::abs(mixed_value_by_enumeration(g, theta, u) -
                              mixed_value_by_enumeration(g, theta_prime, u));
    r.sampled_sup = std::max(r.sampled_sup, d);
  }
  const auto vertex = FiniteDistribution::dirac(r.witness_state);
  r.witness = std::abs(mixed_value_by_enumeration(g, theta, vertex) -
                       mixed_value_by_enumeration(g, theta_prime, vertex));
  constexpr double kTol = 1e-9;
  r.holds = r.sampled_sup <= r.vertex_sup + kTol && std::abs(r.witness - r.vertex_sup) <= kTol;
  return r;
}

std::set<std::size_t> support_closure(const GamblingHouse& g, std::size_t x) {
  if (x >= g.size()) throw UnknownState("unknown house state");
  std::set<std::size_t> seen{x};
  std::vector<std::size_t> stack{x};
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (const auto& u : g.transitions(cur))
      for (const auto& [y, p] : u.entries())
        if (seen.insert(y).second) stack.push_back(y);
  }
  return seen;
}

DelayedSup house_delayed_sup(const GamblingHouse& g, const Evaluation& theta, std::size_t m_max,
                             const EngineOptions& opts) {
  const std::size_t n = g.size();
  const HouseValues v = gh_value_function(g, theta, opts);
  DelayedSup out;
  out.upper.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    double best = 0.0;
    for (std::size_t y : support_closure(g, x)) best = std::max(best, v.values[y]);
    out.upper[x] = best;
  }
  out.lower = v.values;
  std::vector<double> w = v.values, next(n);
  auto closed = [&] {
    for (std::size_t x = 0; x < n; ++x)
      if (out.lower[x] < out.upper[x]) return false;
    return true;
  };
  for (std::size_t m = 1; m <= m_max && !closed(); ++m) {
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& u : g.transitions(x)) {
        double s = 0.0;
        for (const auto& [y, p] : u.entries()) s += p * w[y];
        best = std::max(best, s);
      }
      next[x] = best;
      out.lower[x] = std::max(out.lower[x], best);
    }
    std::swap(w, next);
  }
  out.exact.resize(n);
  for (std::size_t x = 0; x < n; ++x) out.exact[x] = out.lower[x] >= out.upper[x];
  return out;
}

HouseVStar gh_v_star(const GamblingHouse& g, const Family& family, std::size_t m_max,
                     const EngineOptions& opts) {
  if (family.empty()) throw InvalidFamily("v* needs a nonempty family");
  const std::size_t n = g.size();
  HouseVStar out;
  out.family = diagnose_family(family, opts.vstar_tv_threshold);
  out.lower.assign(n, std::numeric_limits<double>::infinity());
  out.upper.assign(n, std::numeric_limits<double>::infinity());
  out.witness_k.assign(n, 0);
  for (const FamilyMember& member : family) {
    const DelayedSup s = house_delayed_sup(g, member.eval, m_max, opts);
    for (std::size_t x = 0; x < n; ++x) {
      if (s.lower[x] < out.lower[x]) {
        out.lower[x] = s.lower[x];
        out.witness_k[x] = member.k;
      }
      out.upper[x] = std::min(out.upper[x], s.upper[x]);
    }
  }
  return out;
}

}  // namespace dplimit
