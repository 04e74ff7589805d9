#include <gtest/gtest.h>

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/state_space.hpp"
#include "reference.hpp"

using dplimit::FiniteGraph;
using dplimit::Problem;
using dplimit::State;
using dplimit::StateSet;

namespace {

State s(std::size_t i) { return Problem::finite_state(i); }

// z0 -> {z1, z2}, z1 -> {z3}, z2 -> {z2}, z3 -> {z0}
Problem diamond() {
  return Problem::finite({{"z0", "z1", "z2", "z3"}, {{1, 2}, {3}, {2}, {0}}, {0.0, 0.5, 0.25, 1.0}});
}

}  // namespace

TEST(StateSpaceTest, FiniteValidation) {
  EXPECT_THROW(Problem::finite({{}, {}, {}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a"}, {{}}, {0.0}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a"}, {{1}}, {0.0}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a", "a"}, {{0}, {1}}, {0.0, 0.0}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a"}, {{0}}, {1.5}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a"}, {{0}}, {-0.1}}), dplimit::InvalidInstance);
  EXPECT_THROW(Problem::finite({{"a"}, {{0}}, {}}), dplimit::InvalidInstance);
}

TEST(StateSpaceTest, LabelsAndLookups) {
  const Problem p = diamond();
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.label(s(2)), "z2");
  EXPECT_EQ(p.parse("z3"), s(3));
  EXPECT_THROW(p.parse("nope"), dplimit::UnknownState);
  EXPECT_THROW(p.successors(s(9)), dplimit::UnknownState);
  EXPECT_EQ(p.successors(s(0)), (std::vector<State>{s(1), s(2)}));
  EXPECT_EQ(p.reward(s(3)), 1.0);
  EXPECT_FALSE(p.depth_cap().has_value());
  EXPECT_FALSE(p.is_uncontrolled());
  EXPECT_TRUE(dplimit::example1_cycle().is_uncontrolled());
}

TEST(StateSpaceTest, ReachabilityOnAHandGraph) {
  const Problem p = diamond();
  EXPECT_EQ(dplimit::reach_exact(p, s(0), 0), (StateSet{s(0)}));
  EXPECT_EQ(dplimit::reach_exact(p, s(0), 1), (StateSet{s(1), s(2)}));
  EXPECT_EQ(dplimit::reach_exact(p, s(0), 2), (StateSet{s(2), s(3)}));
  EXPECT_EQ(dplimit::reach_exact(p, s(0), 3), (StateSet{s(0), s(2)}));
  EXPECT_EQ(dplimit::reach_within(p, s(0), 1), (StateSet{s(0), s(1), s(2)}));
  const auto c = dplimit::reach_closure(p, s(0));
  EXPECT_TRUE(c.saturated);
  EXPECT_EQ(c.states.size(), 4u);
  EXPECT_EQ(dplimit::reach_closure(p, s(2)).states, (StateSet{s(2)}));
}

TEST(StateSpaceTest, ReachabilityMatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Problem p = dplimit::random_problem(2 + seed % 6, 1 + seed % 3, seed);
    for (const State& z : p.states()) {
      StateSet frontier{z}, within{z};
      for (std::size_t n = 1; n <= 6; ++n) {
        StateSet next;
        for (const State& x : frontier)
          for (const State& y : p.successors(x)) next.insert(y);
        frontier = next;
        within.insert(next.begin(), next.end());
        EXPECT_EQ(dplimit::reach_exact(p, z, n), frontier);
        EXPECT_EQ(dplimit::reach_within(p, z, n), within);
      }
      // Monotone in m and saturating at the closure.
      EXPECT_EQ(dplimit::reach_within(p, z, p.size()), dplimit::reach_closure(p, z).states);
    }
  }
}

TEST(StateSpaceTest, PlaysMustBeFeasible) {
  const Problem p = diamond();
  EXPECT_NO_THROW(dplimit::Play(p, s(0), {s(1), s(3), s(0)}));
  EXPECT_THROW(dplimit::Play(p, s(0), {s(3)}), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::Play(p, s(0), {}), dplimit::InvalidInstance);
  const auto play = dplimit::Play::first_successor(p, s(0), 4);
  EXPECT_EQ(play.prefix(), (std::vector<State>{s(1), s(3), s(0), s(1)}));
}

TEST(StateSpaceTest, GeneratedHorizonIsCapped) {
  const Problem tree = dplimit::example2_tree(3, 10);
  EXPECT_EQ(tree.depth_cap(), 10u);
  EXPECT_NO_THROW(tree.check_horizon(10));
  EXPECT_THROW(tree.check_horizon(11), dplimit::CapExceeded);
  EXPECT_THROW(dplimit::reach_exact(tree, tree.parse("root"), 11), dplimit::CapExceeded);
  EXPECT_THROW(tree.size(), dplimit::Error);
}

TEST(StateSpaceTest, ClosureStopsAtAWindow) {
  const Problem line = dplimit::example3_line(5);
  const auto c = dplimit::reach_closure(line, {2, 0});
  EXPECT_FALSE(c.saturated);
  EXPECT_EQ(c.states, (StateSet{{2, 0}, {3, 0}, {4, 0}, {5, 0}}));
  EXPECT_THROW(line.successors({5, 0}), dplimit::CapExceeded);
  EXPECT_THROW(line.parse("6"), dplimit::UnknownState);
}
