#include "dplimit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dplimit/errors.hpp"

namespace dplimit {

using nlohmann::json;

nlohmann::json evaluation_to_json(const Evaluation& theta) {
  switch (theta.kind()) {
    case EvaluationKind::kWeights:
      return {{"kind", "weights"}, {"w", theta.explicit_weights()}};
    case EvaluationKind::kCesaro:
      return {{"kind", "cesaro"}, {"n", theta.cesaro_n()}};
    case EvaluationKind::kDiscounted:
      return {{"kind", "discounted"}, {"lambda", theta.discount()}};
    case EvaluationKind::kDirac:
      return {{"kind", "dirac"}, {"t", theta.dirac_stage()}};
    case EvaluationKind::kDelayed:
      return {{"kind", "delayed"}, {"m", theta.delay_amount()}, {"base", evaluation_to_json(theta.delay_base())}};
  }
  throw InvalidEvaluation("unknown evaluation kind");
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidEvaluation(std::string("evaluation is missing '") + key + "'");
  const json& v = j.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw InvalidEvaluation(std::string("'") + key + "' must be an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw InvalidEvaluation(std::string("'") + key + "' must be a number");
  }
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw InvalidEvaluation(std::string("'") + key + "': " + e.what());
  }
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInstance(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Evaluation evaluation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InvalidEvaluation("evaluation must be an object with a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cesaro") return Evaluation::cesaro(field<std::int64_t>(j, "n"));
  if (kind == "discounted") return Evaluation::discounted(field<double>(j, "lambda"));
  if (kind == "dirac") return Evaluation::dirac(field<std::int64_t>(j, "t"));
  if (kind == "weights") {
    if (!j.contains("w") || !j.at("w").is_array()) throw InvalidEvaluation("'w' must be an array");
    return Evaluation::weights(field<std::vector<double>>(j, "w"));
  }
  if (kind == "delayed") {
    if (!j.contains("base")) throw InvalidEvaluation("evaluation is missing 'base'");
    return delay(evaluation_from_json(j.at("base")), field<std::int64_t>(j, "m"));
  }
  throw InvalidEvaluation("unknown evaluation kind '" + kind + "'");
}

Evaluation parse_evaluation(std::string_view text) {
  try {
    return evaluation_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw InvalidEvaluation(std::string("malformed evaluation JSON: ") + e.what());
  }
}

nlohmann::json problem_to_json(const Problem& p) {
  const FiniteGraph& g = p.graph();
  json transitions = json::object(), rewards = json::object();
  for (std::size_t z = 0; z < g.names.size(); ++z) {
    json succ = json::array();
    for (std::size_t y : g.successors[z]) succ.push_back(g.names[y]);
    transitions[g.names[z]] = succ;
    rewards[g.names[z]] = g.rewards[z];
  }
  return {{"states", g.names}, {"transitions", transitions}, {"rewards", rewards}};
}

namespace {

struct Tables {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  std::vector<double> rewards;
};

Tables read_tables(const json& j) {
  if (!j.is_object() || !j.contains("states") || !j.contains("transitions") || !j.contains("rewards"))
    throw InvalidInstance("instance JSON needs 'states', 'transitions' and 'rewards'");
  const json& states = j.at("states");
  if (!states.is_array()) throw InvalidInstance("'states' must be an array");
  Tables t;
  for (const auto& s : states) {
    if (!s.is_string()) throw InvalidInstance("state names must be strings");
    const auto name = s.get<std::string>();
    if (!t.index.emplace(name, t.names.size()).second)
      throw InvalidInstance("duplicate state name '" + name + "'");
    t.names.push_back(name);
  }
  const json& rewards = j.at("rewards");
  if (!rewards.is_object()) throw InvalidInstance("'rewards' must be an object");
  t.rewards.assign(t.names.size(), 0.0);
  std::vector<bool> seen(t.names.size(), false);
  for (const auto& [name, r] : rewards.items()) {
    auto it = t.index.find(name);
    if (it == t.index.end()) throw InvalidInstance("reward for unknown state '" + name + "'");
    if (!r.is_number()) throw InvalidInstance("reward of '" + name + "' must be a number");
    t.rewards[it->second] = r.get<double>();
    seen[it->second] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw InvalidInstance("missing reward for '" + t.names[i] + "'");
  if (!j.at("transitions").is_object()) throw InvalidInstance("'transitions' must be an object");
  return t;
}

std::size_t lookup(const Tables& t, const std::string& name) {
  auto it = t.index.find(name);
  if (it == t.index.end()) throw InvalidInstance("transition to unknown state '" + name + "'");
  return it->second;
}

bool looks_like_house(const json& j) {
  if (!j.contains("transitions") || !j.at("transitions").is_object()) return false;
  for (const auto& [name, list] : j.at("transitions").items())
    if (list.is_array() && !list.empty()) return list.front().is_object();
  return false;
}

}  // namespace

Problem problem_from_json(const nlohmann::json& j) {
  Tables t = read_tables(j);
  FiniteGraph g{t.names, std::vector<std::vector<std::size_t>>(t.names.size()), t.rewards};
  for (const auto& [name, list] : j.at("transitions").items()) {
    const std::size_t z = lookup(t, name);
    if (!list.is_array()) throw InvalidInstance("successors of '" + name + "' must be an array");
    for (const auto& y : list) {
      if (!y.is_string()) throw InvalidInstance("successor names must be strings");
      g.successors[z].push_back(lookup(t, y.get<std::string>()));
    }
  }
  return Problem::finite(std::move(g));
}

nlohmann::json house_to_json(const GamblingHouse& g) {
  json transitions = json::object(), rewards = json::object();
  for (std::size_t x = 0; x < g.size(); ++x) {
    json list = json::array();
    for (const auto& u : g.transitions(x)) {
      json d = json::object();
      for (const auto& [y, p] : u.entries()) d[g.names()[y]] = p;
      list.push_back(d);
    }
    transitions[g.names()[x]] = list;
    rewards[g.names()[x]] = g.reward(x);
  }
  return {{"states", g.names()}, {"transitions", transitions}, {"rewards", rewards}};
}

GamblingHouse house_from_json(const nlohmann::json& j) {
  Tables t = read_tables(j);
  std::vector<std::vector<FiniteDistribution>> transitions(t.names.size());
  for (const auto& [name, list] : j.at("transitions").items()) {
    const std::size_t x = lookup(t, name);
    if (!list.is_array()) throw InvalidInstance("distributions of '" + name + "' must be an array");
    for (const auto& d : list) {
      if (!d.is_object()) throw InvalidInstance("a distribution must map state names to probabilities");
      std::vector<std::pair<std::size_t, double>> entries;
      for (const auto& [y, p] : d.items()) {
        if (!p.is_number()) throw InvalidInstance("probabilities must be numbers");
        entries.emplace_back(lookup(t, y), p.get<double>());
      }
      transitions[x].emplace_back(std::move(entries));
    }
  }
  return GamblingHouse::make(t.names, std::move(transitions), t.rewards);
}

Instance load_instance(std::string_view source, const nlohmann::json& params) {
  const std::string src(source);
  json j;
  if (!src.empty() && (src.front() == '{' || src.front() == '[')) {
    j = parse_json_text(src);
  } else if (std::filesystem::is_regular_file(src)) {
    std::ifstream in(src);
    std::stringstream buf;
    buf << in.rdbuf();
    j = parse_json_text(buf.str());
  } else {
    return make_instance({src, params});
  }
  if (!j.is_object()) throw InvalidInstance("instance JSON must be an object");
  if (j.contains("generator")) {
    if (!j.at("generator").is_string()) throw InvalidInstance("'generator' must be a string");
    json merged = j;
    merged.erase("generator");
    for (const auto& [k, v] : params.items()) merged[k] = v;
    return make_instance({j.at("generator").get<std::string>(), merged});
  }
  if (looks_like_house(j)) return house_from_json(j);
  return problem_from_json(j);
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace dplimit
