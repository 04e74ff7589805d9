#include "dplimit/oracle.hpp"

#include <limits>

#include "dplimit/errors.hpp"

namespace dplimit {

namespace {

struct Search {
  const Problem& p;
  std::vector<double> w;
  std::uint64_t budget;
  std::vector<State> path;
  OracleResult best;

  void dfs(const State& z) {
    if (path.size() == w.size()) {
      if (++best.count > budget) throw ExplosionGuard("oracle exceeded its play budget");
      double acc = 0.0;
      for (std::size_t t = path.size(); t >= 1; --t) acc = w[t - 1] * p.reward(path[t - 1]) + acc;
      if (acc > best.value || best.play.empty()) {
        best.value = acc;
        best.play = path;
      }
      return;
    }
    for (const State& y : p.successors(z)) {
      path.push_back(y);
      dfs(y);
      path.pop_back();
    }
  }
};

}  // namespace

OracleResult brute_value(const Problem& p, const Evaluation& theta, const State& z, std::size_t horizon,
                         std::uint64_t leaf_budget) {
  const auto support = theta.support();
  if (!support || static_cast<std::size_t>(*support) > horizon)
    throw SupportExceedsHorizon("evaluation has mass beyond the oracle horizon");
  if (horizon == 0) throw SupportExceedsHorizon("oracle horizon must be positive");
  if (!p.contains(z)) throw UnknownState("unknown state");
  p.check_horizon(horizon);
  std::vector<double> w = materialize(theta, 1.0).weights;
  w.resize(horizon, 0.0);
  Search s{p, std::move(w), leaf_budget, {}, {}};
  s.path.reserve(horizon);
  s.dfs(z);
  return std::move(s.best);
}

}  // namespace dplimit
