#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dplimit/corpus.hpp"
#include "dplimit/evaluation.hpp"
#include "dplimit/gambling.hpp"
#include "dplimit/state_space.hpp"

namespace dplimit {

/// {"kind":"cesaro","n":10}, {"kind":"discounted","lambda":0.05},
/// {"kind":"dirac","t":3}, {"kind":"weights","w":[...]},
/// {"kind":"delayed","m":5,"base":{...}}.
nlohmann::json evaluation_to_json(const Evaluation& theta);
/// Throws InvalidEvaluation on unknown kinds, missing or mistyped fields.
Evaluation evaluation_from_json(const nlohmann::json& j);
/// Parses JSON text; throws InvalidEvaluation on syntax errors.
Evaluation parse_evaluation(std::string_view text);

/// {"states":[...], "transitions":{"z0":["z1"]}, "rewards":{"z0":0.0}}.
nlohmann::json problem_to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);

/// {"states":[...], "transitions":{"x0":[{"x0":0.5,"x1":0.5}]}, "rewards":{...}}.
nlohmann::json house_to_json(const GamblingHouse& g);
GamblingHouse house_from_json(const nlohmann::json& j);

/// Instance from a registry name (with `params`), a path to a JSON file, or
/// inline JSON text. JSON may describe a finite problem, a gambling house,
/// or {"generator": name, ...params}. Throws InvalidInstance.
Instance load_instance(std::string_view source, const nlohmann::json& params = nlohmann::json::object());

/// x rounded to 12 significant digits, the precision used in every report.
double round12(double x);

}  // namespace dplimit
