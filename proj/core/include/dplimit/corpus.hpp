#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dplimit/evaluation.hpp"
#include "dplimit/gambling.hpp"
#include "dplimit/state_space.hpp"

namespace dplimit {

/// Two-state cycle z0 <-> z1 with r(z0) = 0, r(z1) = 1.
Problem example1_cycle();

/// Capped self-similar tree. States: root = (0, 0) and (n, p) with
/// 1 <= n <= branching_cap, p >= 1 (branch n, position p). Reward 1 iff
/// n < p <= 2n. The root offers the branch starts (n, 1); every other node
/// offers (n, p + 1) and all branch starts. Labels: "root" and "n:p".
/// Queries may expand at most depth_cap stages. Throws InvalidInstance
/// unless both caps are >= 2.
Problem example2_tree(std::size_t branching_cap, std::size_t depth_cap);

/// The integer line -window..window with F(z) = {z + 1} and r(0) = 1.
/// Stepping past the window throws CapExceeded. Labels are the integers.
Problem example3_line(std::int64_t window);

/// Seeded random problem with states z0..z{n-1}, each with 1..max_branching
/// distinct successors and a reward on the grid {0, 1/16, ..., 1}.
Problem random_problem(std::size_t states, std::size_t max_branching, std::uint64_t seed);

/// Deterministic cycle z0 -> z1 -> ... -> z{period-1} -> z0 with r(z_i) = pattern[i].
Problem uncontrolled_cycle(std::size_t period, const std::vector<double>& pattern);

/// Seeded random gambling house x0..x{n-1}: 1..max_distributions
/// distributions per state, each with support of size 1..3 and weights on a
/// grid; rewards on the 1/16 grid.
GamblingHouse random_house(std::size_t states, std::size_t max_distributions, std::uint64_t seed);

/// (1/k) sum_{t<=k} delta_{2t-1}.
Evaluation odd_comb(std::int64_t k);
/// (1/k) sum_{t<=k} delta_{2t}.
Evaluation even_comb(std::int64_t k);
/// The non-converging family: odd comb for even k, even comb for odd k.
Evaluation alternating_comb(std::int64_t k);

using Instance = std::variant<Problem, GamblingHouse>;

struct InstanceSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

/// Registry: "example1_cycle", "example2_tree" {branching_cap, depth_cap},
/// "example3_line" {window}, "random" {states, max_branching, seed},
/// "uncontrolled_cycle" {period, pattern}, "random_house"
/// {states, max_distributions, seed}. Missing parameters take defaults.
/// Throws InvalidInstance for unknown names or out-of-range parameters.
Instance make_instance(const InstanceSpec& spec);

std::vector<std::string> registry_names();

}  // namespace dplimit
