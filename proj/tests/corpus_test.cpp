#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/value_engine.hpp"
#include "reference.hpp"

using dplimit::Evaluation;
using dplimit::State;

namespace {

bool on_grid(double r) {
  const double scaled = r * 16.0;
  return r >= 0.0 && r <= 1.0 && scaled == std::floor(scaled);
}

std::vector<double> prefix(const Evaluation& theta, std::int64_t len) {
  std::vector<double> w;
  for (std::int64_t t = 1; t <= len; ++t) w.push_back(theta.weight(t));
  return w;
}

}  // namespace

TEST(CorpusTest, RandomProblemsAreDeterministicAndWellFormed) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const std::size_t b = 1 + seed % 4;
    const auto p = dplimit::random_problem(n, b, seed);
    const auto q = dplimit::random_problem(n, b, seed);
    EXPECT_EQ(p.graph().successors, q.graph().successors);
    EXPECT_EQ(p.graph().rewards, q.graph().rewards);
    ASSERT_EQ(p.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& succ = p.graph().successors[i];
      EXPECT_GE(succ.size(), 1u);
      EXPECT_LE(succ.size(), std::min(n, b));
      EXPECT_TRUE(std::is_sorted(succ.begin(), succ.end()));
      EXPECT_EQ(std::adjacent_find(succ.begin(), succ.end()), succ.end());
      EXPECT_TRUE(on_grid(p.graph().rewards[i]));
      EXPECT_EQ(p.graph().names[i], "z" + std::to_string(i));
    }
  }
  bool differs = false;
  for (std::uint64_t seed = 1; seed < 10 && !differs; ++seed)
    differs = dplimit::random_problem(6, 3, 0).graph().rewards != dplimit::random_problem(6, 3, seed).graph().rewards;
  EXPECT_TRUE(differs);
}

TEST(CorpusTest, RandomHousesAreDeterministicAndWellFormed) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = dplimit::random_house(2 + seed % 5, 3, seed);
    const auto h = dplimit::random_house(2 + seed % 5, 3, seed);
    EXPECT_EQ(g.rewards(), h.rewards());
    for (std::size_t x = 0; x < g.size(); ++x) {
      EXPECT_EQ(g.transitions(x), h.transitions(x));
      EXPECT_GE(g.transitions(x).size(), 1u);
      EXPECT_LE(g.transitions(x).size(), 3u);
      for (const auto& u : g.transitions(x)) {
        EXPECT_LE(u.entries().size(), 3u);
        double total = 0.0;
        for (const auto& [y, p] : u.entries()) {
          EXPECT_LT(y, g.size());
          EXPECT_GT(p, 0.0);
          total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
      EXPECT_TRUE(on_grid(g.reward(x)));
    }
  }
}

TEST(CorpusTest, CycleValues) {
  const auto p = dplimit::example1_cycle();
  EXPECT_EQ(p.graph().names, (std::vector<std::string>{"z0", "z1"}));
  EXPECT_EQ(p.graph().rewards, (std::vector<double>{0.0, 1.0}));
  const auto z0 = p.parse("z0");
  for (std::int64_t k = 1; k <= 40; ++k) {
    EXPECT_NEAR(dplimit::value(p, dplimit::odd_comb(k), z0).value, 1.0, 1e-12);
    EXPECT_EQ(dplimit::value(p, dplimit::even_comb(k), z0).value, 0.0);
    EXPECT_NEAR(dplimit::value(p, dplimit::alternating_comb(k), z0).value, k % 2 == 0 ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_THROW(dplimit::uncontrolled_cycle(3, {0.0, 1.0}), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::uncontrolled_cycle(0, {}), dplimit::InvalidInstance);
}

TEST(CorpusTest, CombWeightsAndVariation) {
  for (std::int64_t k = 1; k <= 30; ++k) {
    const auto odd = dplimit::odd_comb(k);
    const auto even = dplimit::even_comb(k);
    for (std::int64_t t = 1; t <= 2 * k + 2; ++t) {
      const double expected_odd = (t % 2 == 1 && t <= 2 * k - 1) ? 1.0 / static_cast<double>(k) : 0.0;
      const double expected_even = (t % 2 == 0 && t <= 2 * k) ? 1.0 / static_cast<double>(k) : 0.0;
      EXPECT_EQ(odd.weight(t), expected_odd);
      EXPECT_EQ(even.weight(t), expected_even);
    }
    EXPECT_NEAR(dplimit::total_variation(odd), ref::tv(prefix(odd, 2 * k)), 1e-12);
    EXPECT_NEAR(dplimit::total_variation(even), ref::tv(prefix(even, 2 * k)), 1e-12);
    EXPECT_GE(dplimit::total_variation(even), 2.0 - 1e-12);
  }
}

TEST(CorpusTest, TreeRewardsExhaustive) {
  const std::size_t cap = 6;
  const auto tree = dplimit::example2_tree(cap, 40);
  const auto root = tree.parse("root");
  EXPECT_EQ(tree.reward(root), 0.0);
  EXPECT_EQ(tree.successors(root).size(), cap);
  for (std::int64_t n = 1; n <= static_cast<std::int64_t>(cap); ++n) {
    int ones = 0;
    for (std::int64_t p = 1; p <= 4 * n; ++p) {
      const State z{n, p};
      EXPECT_EQ(tree.label(z), std::to_string(n) + ":" + std::to_string(p));
      EXPECT_EQ(tree.parse(tree.label(z)), z);
      const double r = tree.reward(z);
      EXPECT_TRUE(r == 0.0 || r == 1.0);
      if (r == 1.0) {
        ++ones;
        EXPECT_GT(p, n);
        EXPECT_LE(p, 2 * n);
      }
      const auto succ = tree.successors(z);
      EXPECT_EQ(succ.size(), cap + 1);
      EXPECT_EQ(succ.front(), (State{n, p + 1}));
    }
    EXPECT_EQ(ones, n);
  }
  EXPECT_THROW(tree.parse("7:1"), dplimit::UnknownState);
  EXPECT_THROW(tree.parse("0:0"), dplimit::UnknownState);
  EXPECT_THROW(dplimit::example2_tree(1, 10), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::example2_tree(4, 1), dplimit::InvalidInstance);
}

TEST(CorpusTest, TreeEvenCesaroValuesAreOneHalf) {
  const auto tree = dplimit::example2_tree(8, 64);
  const auto root = tree.parse("root");
  for (std::int64_t m = 1; m <= 8; ++m) EXPECT_NEAR(dplimit::value(tree, Evaluation::cesaro(2 * m), root).value, 0.5, 1e-12);
  for (std::int64_t k = 1; k <= 8; ++k)
    EXPECT_NEAR(dplimit::value(tree, dplimit::delay(Evaluation::cesaro(k), k), root).value, 1.0, 1e-12);
}

TEST(CorpusTest, LineDiracValues) {
  const auto line = dplimit::example3_line(20);
  for (std::int64_t t = 1; t <= 20; ++t) {
    EXPECT_EQ(dplimit::value(line, Evaluation::dirac(t), {-t, 0}).value, 1.0);
    EXPECT_EQ(dplimit::value(line, Evaluation::dirac(t), {-t + 1, 0}).value, 0.0);
  }
  EXPECT_EQ(line.label({-3, 0}), "-3");
  EXPECT_EQ(line.parse("-3"), (State{-3, 0}));
  EXPECT_EQ(line.reward({0, 0}), 1.0);
  EXPECT_EQ(line.reward({1, 0}), 0.0);
}

TEST(CorpusTest, RegistryDefaultsAndErrors) {
  const auto names = dplimit::registry_names();
  EXPECT_EQ(names.size(), 6u);
  for (const auto& name : names) EXPECT_NO_THROW(dplimit::make_instance({name, nlohmann::json::object()})) << name;
  const auto cycle = std::get<dplimit::Problem>(dplimit::make_instance({"uncontrolled_cycle", nlohmann::json::object()}));
  EXPECT_EQ(cycle.graph().rewards, (std::vector<double>{0.0, 1.0}));
  const auto tree = std::get<dplimit::Problem>(dplimit::make_instance({"example2_tree", nlohmann::json::object()}));
  EXPECT_EQ(tree.depth_cap(), 64u);
  EXPECT_EQ(tree.generator().branching_cap(), 9u);
  const auto rnd = std::get<dplimit::Problem>(
      dplimit::make_instance({"random", {{"states", 5}, {"max_branching", 2}, {"seed", 9}}}));
  EXPECT_EQ(rnd.graph().successors, dplimit::random_problem(5, 2, 9).graph().successors);
  EXPECT_TRUE(std::holds_alternative<dplimit::GamblingHouse>(dplimit::make_instance({"random_house", nlohmann::json::object()})));
  EXPECT_THROW(dplimit::make_instance({"nope", nlohmann::json::object()}), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::make_instance({"random", {{"states", 0}}}), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::make_instance({"random", {{"states", "six"}}}), dplimit::InvalidInstance);
}
