#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dplimit/corpus.hpp"
#include "dplimit/value_engine.hpp"

namespace dplimit::cli {

/// One line of a verification report: `value` must not exceed `budget`.
struct CheckRow {
  std::string check;
  std::string instance;
  double value = 0.0;
  double budget = 0.0;
  bool holds = false;
};

struct SuiteOptions {
  std::vector<std::uint64_t> seeds;
  EngineOptions engine;
};

/// lemma1, bellman, fixpoint, delay, oracle, sandwich, affinity,
/// uncontrolled, theorem1 (and "all").
const std::vector<std::string>& suite_names();

/// Runs a suite over the corpus and seeded random instances, or over the
/// given instance only. Throws InvalidInstance for an unknown suite.
std::vector<CheckRow> run_suite(const std::string& suite, const SuiteOptions& opts,
                                const std::optional<Instance>& instance = std::nullopt);

/// Parses "A..B" or "a,b,c" into seeds.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

}  // namespace dplimit::cli
