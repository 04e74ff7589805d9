#include "dplimit/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

#include "dplimit/errors.hpp"

namespace dplimit {

namespace {

std::vector<std::string> indexed_names(const char* prefix, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

class TreeGenerator final : public Generator {
 public:
  TreeGenerator(std::size_t cap, std::size_t depth) : cap_(cap), depth_(depth) {}

  std::string name() const override { return "example2_tree"; }

  bool contains(const State& z) const override {
    if (z.a == 0 && z.b == 0) return true;
    return z.a >= 1 && z.a <= static_cast<std::int64_t>(cap_) && z.b >= 1;
  }

  std::vector<State> successors(const State& z) const override {
    std::vector<State> out;
    out.reserve(cap_ + 1);
    if (!(z.a == 0 && z.b == 0)) out.push_back({z.a, z.b + 1});
    for (std::size_t n = 1; n <= cap_; ++n) out.push_back({static_cast<std::int64_t>(n), 1});
    return out;
  }

  double reward(const State& z) const override {
    return z.a < z.b && z.b <= 2 * z.a ? 1.0 : 0.0;
  }

  std::string label(const State& z) const override {
    if (z.a == 0 && z.b == 0) return "root";
    return std::to_string(z.a) + ":" + std::to_string(z.b);
  }

  std::optional<State> parse(std::string_view s) const override {
    if (s == "root") return State{0, 0};
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto n = parse_int(s.substr(0, colon));
    const auto p = parse_int(s.substr(colon + 1));
    if (!n || !p) return std::nullopt;
    const State z{*n, *p};
    if (!contains(z) || z == State{0, 0}) return std::nullopt;
    return z;
  }

  std::size_t branching_cap() const override { return cap_ + 1; }
  std::size_t depth_cap() const override { return depth_; }

 private:
  std::size_t cap_;
  std::size_t depth_;
};

class LineGenerator final : public Generator {
 public:
  explicit LineGenerator(std::int64_t window) : window_(window) {}

  std::string name() const override { return "example3_line"; }

  bool contains(const State& z) const override {
    return z.b == 0 && z.a >= -window_ && z.a <= window_;
  }

  std::vector<State> successors(const State& z) const override {
    if (z.a + 1 > window_)
      throw CapExceeded("example3_line: successor of " + std::to_string(z.a) + " leaves the window " +
                        std::to_string(window_));
    return {{z.a + 1, 0}};
  }

  double reward(const State& z) const override { return z.a == 0 ? 1.0 : 0.0; }

  std::string label(const State& z) const override { return std::to_string(z.a); }

  std::optional<State> parse(std::string_view s) const override {
    const auto v = parse_int(s);
    if (!v) return std::nullopt;
    const State z{*v, 0};
    if (!contains(z)) return std::nullopt;
    return z;
  }

  std::size_t branching_cap() const override { return 1; }
  std::size_t depth_cap() const override { return static_cast<std::size_t>(2 * window_); }

 private:
  std::int64_t window_;
};

Evaluation comb(std::int64_t k, std::int64_t offset) {
  if (k < 1) throw InvalidEvaluation("comb size must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(2 * k), 0.0);
  for (std::int64_t t = 1; t <= k; ++t) w[static_cast<std::size_t>(2 * t - offset - 1)] = 1.0 / static_cast<double>(k);
  return Evaluation::weights(std::move(w));
}

double grid_reward(std::mt19937_64& rng) { return static_cast<double>(rng() % 17) / 16.0; }

// k distinct values from 0..n-1, sorted.
std::vector<std::size_t> pick_distinct(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng() % (n - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

template <class T>
T param(const nlohmann::json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("parameter '") + key + "': " + e.what());
  }
}

std::size_t positive(const nlohmann::json& params, const char* key, std::int64_t fallback) {
  const auto v = param<std::int64_t>(params, key, fallback);
  if (v < 1) throw InvalidInstance(std::string("parameter '") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

Problem example1_cycle() { return uncontrolled_cycle(2, {0.0, 1.0}); }

Problem example2_tree(std::size_t branching_cap, std::size_t depth_cap) {
  if (branching_cap < 2 || depth_cap < 2) throw InvalidInstance("example2_tree caps must be >= 2");
  return Problem::generated(std::make_shared<TreeGenerator>(branching_cap, depth_cap));
}

Problem example3_line(std::int64_t window) {
  if (window < 1) throw InvalidInstance("example3_line window must be >= 1");
  return Problem::generated(std::make_shared<LineGenerator>(window));
}

Problem random_problem(std::size_t states, std::size_t max_branching, std::uint64_t seed) {
  if (states < 1 || max_branching < 1) throw InvalidInstance("random problem needs states and branching >= 1");
  std::mt19937_64 rng(seed);
  FiniteGraph g{indexed_names("z", states), {}, {}};
  const std::size_t b_max = std::min(states, max_branching);
  for (std::size_t z = 0; z < states; ++z) {
    const std::size_t b = 1 + rng() % b_max;
    g.successors.push_back(pick_distinct(rng, states, b));
    g.rewards.push_back(grid_reward(rng));
  }
  return Problem::finite(std::move(g));
}

Problem uncontrolled_cycle(std::size_t period, const std::vector<double>& pattern) {
  if (period < 1) throw InvalidInstance("cycle period must be >= 1");
  if (pattern.size() != period) throw InvalidInstance("reward pattern length must equal the period");
  FiniteGraph g{indexed_names("z", period), {}, pattern};
  for (std::size_t z = 0; z < period; ++z) g.successors.push_back({(z + 1) % period});
  return Problem::finite(std::move(g));
}

GamblingHouse random_house(std::size_t states, std::size_t max_distributions, std::uint64_t seed) {
  if (states < 1 || max_distributions < 1) throw InvalidInstance("random house needs states and distributions >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<FiniteDistribution>> transitions(states);
  std::vector<double> rewards;
  for (std::size_t x = 0; x < states; ++x) {
    const std::size_t d = 1 + rng() % max_distributions;
    for (std::size_t i = 0; i < d; ++i) {
      const auto support = pick_distinct(rng, states, 1 + rng() % std::min<std::size_t>(3, states));
      std::vector<double> w;
      for (std::size_t j = 0; j < support.size(); ++j) w.push_back(static_cast<double>(1 + rng() % 4));
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      std::vector<std::pair<std::size_t, double>> entries;
      for (std::size_t j = 0; j < support.size(); ++j) entries.emplace_back(support[j], w[j] / total);
      transitions[x].emplace_back(std::move(entries));
    }
    rewards.push_back(grid_reward(rng));
  }
  return GamblingHouse::make(indexed_names("x", states), std::move(transitions), std::move(rewards));
}

Evaluation odd_comb(std::int64_t k) { return comb(k, 1); }
Evaluation even_comb(std::int64_t k) { return comb(k, 0); }
Evaluation alternating_comb(std::int64_t k) { return k % 2 == 0 ? odd_comb(k) : even_comb(k); }

Instance make_instance(const InstanceSpec& spec) {
  const auto& p = spec.params;
  if (!p.is_object()) throw InvalidInstance("instance parameters must be a JSON object");
  if (spec.name == "example1_cycle") return example1_cycle();
  if (spec.name == "example2_tree")
    return example2_tree(positive(p, "branching_cap", 8), positive(p, "depth_cap", 64));
  if (spec.name == "example3_line") return example3_line(static_cast<std::int64_t>(positive(p, "window", 50)));
  if (spec.name == "random")
    return random_problem(positive(p, "states", 6), positive(p, "max_branching", 3),
                          param<std::uint64_t>(p, "seed", 0));
  if (spec.name == "uncontrolled_cycle") {
    const auto pattern = param<std::vector<double>>(p, "pattern", {0.0, 1.0});
    return uncontrolled_cycle(positive(p, "period", static_cast<std::int64_t>(pattern.size())), pattern);
  }
  if (spec.name == "random_house")
    return random_house(positive(p, "states", 4), positive(p, "max_distributions", 3),
                        param<std::uint64_t>(p, "seed", 0));
  throw InvalidInstance("unknown instance '" + spec.name + "'");
}

std::vector<std::string> registry_names() {
  return {"example1_cycle", "example2_tree", "example3_line", "random", "uncontrolled_cycle", "random_house"};
}

}  // namespace dplimit
