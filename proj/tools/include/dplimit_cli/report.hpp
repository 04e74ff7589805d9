#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dplimit/value_engine.hpp"

namespace dplimit::cli {

using Json = nlohmann::ordered_json;

/// A number rounded to 12 significant digits for JSON output.
Json number(double x);
/// %.12g, the CSV float format.
std::string format_number(double x);

/// family,k,tv,state,value,error,dist_to_vstar
void write_sweep_csv(const Problem& p, const SweepResult& result, std::ostream& os);

}  // namespace dplimit::cli
