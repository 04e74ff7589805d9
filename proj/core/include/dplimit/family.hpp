#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dplimit/evaluation.hpp"

namespace dplimit {

/// One member theta^k of a sequence of evaluations. `k` is the label used in
/// reports: the range parameter for range syntaxes, otherwise the 1-based
/// position.
struct FamilyMember {
  std::int64_t k;
  Evaluation eval;
};

using Family = std::vector<FamilyMember>;

struct NamedFamily {
  std::string name;
  Family members;
};

/// Parses a compact family spec:
///   cesaro:A..B[:step]      cesaro(k)
///   dirac:A..B              dirac(k)
///   delayedcesaro:A..B      delay(cesaro(k), k)
///   oddcomb:A..B            (1/k) sum_{t<=k} delta_{2t-1}
///   evencomb:A..B           (1/k) sum_{t<=k} delta_{2t}
///   alternating:A..B        oddcomb for even k, evencomb for odd k
///   discounted:geomgrid(a,b,n)   n discount factors geometric from a to b
///   discounted:l1,l2,...
///   [ {...}, {...} ]        JSON list of evaluations
/// Throws InvalidFamily on malformed specs.
Family parse_family(std::string_view spec);

struct FamilyDiagnostics {
  double final_tv = 0.0;
  double min_tv = 0.0;
  // min TV above the acceptance threshold: inf-sup results only bound v* from above.
  bool impatient = false;
  // Some TV(theta^{k+1}) > 2 TV(theta^k).
  bool irregular = false;
};

FamilyDiagnostics diagnose_family(const Family& family, double tv_threshold);

}  // namespace dplimit
