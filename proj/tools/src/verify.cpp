#include "dplimit_cli/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dplimit/errors.hpp"
#include "dplimit/gambling.hpp"
#include "dplimit/oracle.hpp"

namespace dplimit::cli {

namespace {

struct Named {
  std::string name;
  Problem problem;
};

std::vector<Evaluation> property_evaluations() {
  return {
      Evaluation::cesaro(1),
      Evaluation::cesaro(3),
      Evaluation::cesaro(7),
      Evaluation::discounted(0.5),
      Evaluation::discounted(0.1),
      Evaluation::dirac(2),
      Evaluation::weights({0.5, 0.25, 0.25}),
      delay(Evaluation::cesaro(3), 2),
      odd_comb(3),
      Evaluation::weights({0.1, 0.2, 0.3, 0.4}),
  };
}

std::vector<Named> random_problems(const std::vector<std::uint64_t>& seeds, std::size_t max_states) {
  std::vector<Named> out;
  for (std::uint64_t s : seeds) {
    const std::size_t states = 2 + s % (max_states - 1);
    const std::size_t branching = 1 + (s / 3) % 4;
    out.push_back({"random(states=" + std::to_string(states) + ",branching=" + std::to_string(branching) +
                       ",seed=" + std::to_string(s) + ")",
                   random_problem(states, branching, s)});
  }
  return out;
}

std::vector<Named> corpus_finite() {
  return {{"example1_cycle", example1_cycle()},
          {"uncontrolled_cycle(0,0,1,1)", uncontrolled_cycle(4, {0.0, 0.0, 1.0, 1.0})},
          {"uncontrolled_cycle(1,0.5,0)", uncontrolled_cycle(3, {1.0, 0.5, 0.0})}};
}

std::vector<Named> finite_targets(const std::optional<Instance>& instance, const SuiteOptions& opts,
                                  std::size_t max_states) {
  if (instance) {
    const auto* p = std::get_if<Problem>(&*instance);
    if (!p || !p->is_finite()) return {};
    return {{"instance", *p}};
  }
  auto out = corpus_finite();
  for (auto& n : random_problems(opts.seeds, max_states)) out.push_back(std::move(n));
  return out;
}

CheckRow row(std::string check, std::string instance, double value, double budget, bool holds) {
  return {std::move(check), std::move(instance), value, budget, holds};
}

void lemma1_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  for (const auto& t : targets) {
    double worst = -1.0, budget = 0.0;
    bool holds = true;
    for (const auto& theta : property_evaluations()) {
      const Lemma1Report r = lemma1_check(t.problem, theta, opts.engine);
      worst = std::max(worst, r.max_violation);
      budget = r.budget;
      holds = holds && r.holds;
    }
    out.push_back(row("lemma1", t.name, std::max(worst, 0.0), budget, holds));
  }
}

void bellman_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  for (const auto& t : targets) {
    double worst = 0.0, budget = 0.0;
    bool holds = true;
    for (const auto& theta : property_evaluations()) {
      if (theta.first() >= 1.0) continue;
      const ConsistencyReport r = bellman_check(t.problem, theta, opts.engine);
      worst = std::max(worst, r.max_violation);
      budget = r.budget;
      holds = holds && r.holds;
    }
    out.push_back(row("bellman", t.name, worst, budget, holds));
  }
}

void fixpoint_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  for (const auto& t : targets) {
    for (double lambda : {0.5, 0.1, 0.01}) {
      const FixpointReport r = fixpoint_check(t.problem, lambda, opts.engine);
      const std::string name = t.name + " lambda=" + std::to_string(lambda).substr(0, 4);
      out.push_back(row("fixpoint_residual", name, r.residual, r.residual_budget, r.residual <= r.residual_budget));
      out.push_back(
          row("fixpoint_agreement", name, r.agreement, r.agreement_budget, r.agreement <= r.agreement_budget));
    }
  }
}

void delay_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  for (const auto& t : targets) {
    double worst = 0.0, budget = 0.0;
    bool holds = true;
    for (const auto& theta : property_evaluations())
      for (std::size_t m : {1, 2, 5}) {
        const ConsistencyReport r = delay_identity_check(t.problem, theta, m, opts.engine);
        worst = std::max(worst, r.max_violation);
        budget = std::max(budget, r.budget);
        holds = holds && r.holds;
      }
    out.push_back(row("delay", t.name, worst, budget, holds));
  }
}

double oracle_gap(const Problem& p, const Evaluation& theta, const State& z, const EngineOptions& opts) {
  const auto horizon = static_cast<std::size_t>(*theta.support());
  const double v = value(p, theta, z, opts).value;
  const double o = brute_value(p, theta, z, horizon).value;
  return std::abs(v - o);
}

void oracle_suite(const std::vector<Named>& targets, bool with_generated, const SuiteOptions& opts,
                  std::vector<CheckRow>& out) {
  std::vector<Evaluation> evals;
  for (const auto& theta : property_evaluations())
    if (theta.support() && *theta.support() <= 8) evals.push_back(theta);
  for (const auto& t : targets) {
    if (t.problem.size() > 6) continue;
    double worst = 0.0;
    for (const auto& theta : evals)
      for (const State& z : t.problem.states()) worst = std::max(worst, oracle_gap(t.problem, theta, z, opts.engine));
    out.push_back(row("oracle", t.name, worst, 0.0, worst == 0.0));
  }
  if (!with_generated) return;
  const Problem tree = example2_tree(3, 16);
  double worst = 0.0;
  for (const std::string label : {"root", "2:1", "3:4", "1:7"})
    for (const auto& theta : evals)
      worst = std::max(worst, oracle_gap(tree, theta, tree.parse(label), opts.engine));
  out.push_back(row("oracle", "example2_tree(3,16)", worst, 0.0, worst == 0.0));
  const Problem line = example3_line(10);
  worst = 0.0;
  for (std::int64_t z = -10; z <= 2; ++z)
    for (const auto& theta : evals) worst = std::max(worst, oracle_gap(line, theta, {z, 0}, opts.engine));
  out.push_back(row("oracle", "example3_line(10)", worst, 0.0, worst == 0.0));
}

Family sandwich_family() {
  Family f;
  for (std::int64_t k = 1; k <= 40; ++k) f.push_back({k, Evaluation::cesaro(k)});
  return f;
}

void sandwich_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  const Family family = sandwich_family();
  for (const auto& t : targets) {
    double worst = -1.0, budget = 0.0;
    bool holds = true;
    for (const State& z : t.problem.states()) {
      const SandwichReport r = sandwich_check(t.problem, z, family, t.problem.size(), opts.engine);
      worst = std::max(worst, r.inf_sup_bounded - r.liminf - r.eps_lower);
      budget = r.budget;
      holds = holds && r.holds;
    }
    out.push_back(row("sandwich", t.name, std::max(worst, 0.0), budget, holds));
  }
}

std::vector<std::pair<std::string, GamblingHouse>> house_targets(const std::optional<Instance>& instance,
                                                                 const SuiteOptions& opts) {
  if (instance) {
    if (const auto* g = std::get_if<GamblingHouse>(&*instance)) return {{"instance", *g}};
    return {};
  }
  std::vector<std::pair<std::string, GamblingHouse>> out;
  for (std::uint64_t s : opts.seeds) {
    const std::size_t states = 2 + s % 4;
    out.emplace_back("random_house(states=" + std::to_string(states) + ",seed=" + std::to_string(s) + ")",
                     random_house(states, 3, s));
  }
  return out;
}

void affinity_suite(const std::optional<Instance>& instance, const SuiteOptions& opts,
                    std::vector<CheckRow>& out) {
  const std::vector<Evaluation> evals = {Evaluation::dirac(1), Evaluation::cesaro(2), Evaluation::dirac(3),
                                         Evaluation::weights({0.5, 0.3, 0.2})};
  for (const auto& [name, g] : house_targets(instance, opts)) {
    std::vector<std::size_t> all(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) all[x] = x;
    const auto u = FiniteDistribution::uniform(all);
    double worst = 0.0;
    bool holds = true;
    for (const auto& theta : evals) {
      const AffinityReport r = affinity_check(g, theta, u, opts.engine);
      worst = std::max(worst, r.difference);
      holds = holds && r.holds;
    }
    out.push_back(row("affinity", name, worst, 1e-9, holds));
    const DistanceReport d =
        distance_preservation_check(g, evals[1], evals[3], {u, FiniteDistribution::dirac(0)}, opts.engine);
    out.push_back(row("distance_preservation", name, std::max(d.sampled_sup - d.vertex_sup, 0.0), 1e-9, d.holds));
  }
  if (instance) return;
  for (std::uint64_t s : opts.seeds) {
    const Problem p = random_problem(2 + s % 5, 1 + s % 3, s);
    const GamblingHouse g = GamblingHouse::from_problem(p);
    double worst = 0.0;
    for (const auto& theta : property_evaluations()) {
      const ValueFunction vf = value_function(p, theta, opts.engine);
      const HouseValues hv = gh_value_function(g, theta, opts.engine);
      for (std::size_t x = 0; x < g.size(); ++x)
        if (vf.values[x] != hv.values[x]) worst = std::max(worst, std::abs(vf.values[x] - hv.values[x]));
    }
    out.push_back(row("deterministic_embedding", "random(seed=" + std::to_string(s) + ")", worst, 0.0, worst == 0.0));
  }
}

void uncontrolled_suite(const std::optional<Instance>& instance, const SuiteOptions& opts,
                        std::vector<CheckRow>& out) {
  std::vector<Named> cycles;
  if (instance) {
    const auto* p = std::get_if<Problem>(&*instance);
    if (p && p->is_finite() && p->is_uncontrolled()) cycles.push_back({"instance", *p});
  } else {
    for (std::size_t period = 2; period <= 8; ++period) {
      std::vector<double> pattern;
      for (std::size_t i = 0; i < period; ++i) pattern.push_back(static_cast<double>((i * 7 + period) % 5) / 4.0);
      cycles.push_back({"uncontrolled_cycle(period=" + std::to_string(period) + ")",
                        uncontrolled_cycle(period, pattern)});
    }
  }
  for (const auto& c : cycles) {
    const Family family = default_vstar_family(c.problem);
    const std::size_t N = c.problem.size();
    double worst = -1.0;
    bool holds = true;
    for (const auto& theta : property_evaluations()) {
      const UncontrolledReport r = uncontrolled_bound_check(c.problem, theta, N, {0, 0}, family, opts.engine);
      worst = std::max(worst, r.gap - r.bound);
      holds = holds && r.holds;
    }
    out.push_back(row("uncontrolled", c.name, std::max(worst, 0.0), 1e-9, holds));
  }
}

void theorem1_suite(const std::vector<Named>& targets, const SuiteOptions& opts, std::vector<CheckRow>& out) {
  Family family;
  for (std::int64_t k = 1; k <= 1000; ++k) family.push_back({k, Evaluation::cesaro(k)});
  for (const auto& t : targets) {
    const VStarReport vs = v_star_finite(t.problem, {}, family, opts.engine);
    ValueFunction ref;
    ref.states = t.problem.states();
    for (const auto& e : vs.estimates) ref.values.push_back(e.value);
    const double dist = sup_distance(value_function(t.problem, Evaluation::cesaro(500), opts.engine), ref);
    const double bound = 10.0 * total_variation(Evaluation::cesaro(500)) * static_cast<double>(t.problem.size());
    out.push_back(row("theorem1", t.name, dist, bound, dist < bound));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma1",   "bellman",  "fixpoint",     "delay",   "oracle",
                                                 "sandwich", "affinity", "uncontrolled", "theorem1"};
  return names;
}

std::vector<CheckRow> run_suite(const std::string& suite, const SuiteOptions& opts,
                                const std::optional<Instance>& instance) {
  std::vector<CheckRow> out;
  if (suite == "all") {
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, opts, instance);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (suite == "lemma1") lemma1_suite(finite_targets(instance, opts, 10), opts, out);
  else if (suite == "bellman") bellman_suite(finite_targets(instance, opts, 10), opts, out);
  else if (suite == "fixpoint") fixpoint_suite(finite_targets(instance, opts, 10), opts, out);
  else if (suite == "delay") delay_suite(finite_targets(instance, opts, 10), opts, out);
  else if (suite == "oracle") oracle_suite(finite_targets(instance, opts, 6), !instance, opts, out);
  else if (suite == "sandwich") sandwich_suite(finite_targets(instance, opts, 10), opts, out);
  else if (suite == "affinity") affinity_suite(instance, opts, out);
  else if (suite == "uncontrolled") uncontrolled_suite(instance, opts, out);
  else if (suite == "theorem1") theorem1_suite(finite_targets(instance, opts, 10), opts, out);
  else throw InvalidInstance("unknown suite '" + suite + "'");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto to_u64 = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw InvalidInstance("malformed seed list '" + text + "'");
    return v;
  };
  std::vector<std::uint64_t> seeds;
  const std::string_view sv(text);
  const auto dots = sv.find("..");
  if (dots != std::string_view::npos) {
    const std::uint64_t a = to_u64(sv.substr(0, dots)), b = to_u64(sv.substr(dots + 2));
    if (b < a || b - a >= 100'000) throw InvalidInstance("seed range must read A..B with A <= B");
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  for (;;) {
    const auto comma = sv.find(',', start);
    seeds.push_back(to_u64(sv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

}  // namespace dplimit::cli
