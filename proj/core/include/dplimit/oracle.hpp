#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dplimit/evaluation.hpp"
#include "dplimit/state_space.hpp"

namespace dplimit {

struct OracleResult {
  double value = 0.0;
  std::vector<State> play;  // an optimal prefix z_1..z_horizon
  std::uint64_t count = 0;  // plays enumerated
};

/// max over every feasible prefix z_1..z_horizon from z of
/// sum_{t<=horizon} theta_t r(z_t), by depth-first enumeration of all plays.
/// The payoff is summed from the last stage backwards.
/// Throws SupportExceedsHorizon when theta has mass after `horizon` and
/// ExplosionGuard once more than `leaf_budget` plays would be enumerated.
OracleResult brute_value(const Problem& p, const Evaluation& theta, const State& z, std::size_t horizon,
                         std::uint64_t leaf_budget = 10'000'000);

}  // namespace dplimit
