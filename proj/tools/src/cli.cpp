#include "dplimit_cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/family.hpp"
#include "dplimit/gambling.hpp"
#include "dplimit/json_io.hpp"
#include "dplimit/value_engine.hpp"
#include "dplimit_cli/report.hpp"
#include "dplimit_cli/verify.hpp"

namespace dplimit::cli {

namespace {

struct RunConfig {
  std::string instance;
  std::string params = "{}";
  std::string eval;
  std::vector<std::string> families;
  std::vector<std::string> states;
  std::string out;
  double tail_tol = 1e-9;
  double fixpoint_tol = 1e-9;
  std::optional<std::size_t> m0;
  std::string seeds = "0..19";
  std::string suite = "all";
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

EngineOptions engine_options(const RunConfig& c) {
  if (!(c.tail_tol > 0.0) || !(c.fixpoint_tol > 0.0)) throw ConfigError("tolerances must be positive");
  EngineOptions o;
  o.tail_tol = c.tail_tol;
  o.fixpoint_tol = c.fixpoint_tol;
  return o;
}

nlohmann::json parse_params(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ConfigError("--params must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("--params is not valid JSON: ") + e.what());
  }
}

Instance load(const RunConfig& c) {
  if (c.instance.empty()) throw ConfigError("--instance is required");
  return load_instance(c.instance, parse_params(c.params));
}

std::vector<State> select_states(const Problem& p, const std::vector<std::string>& labels) {
  if (labels.empty()) {
    if (!p.is_finite()) throw ConfigError("generated problems need --state or --states");
    return p.states();
  }
  std::vector<State> out;
  for (const auto& l : labels) out.push_back(p.parse(l));
  return out;
}

std::vector<std::size_t> select_house_states(const GamblingHouse& g, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  if (labels.empty())
    for (std::size_t x = 0; x < g.size(); ++x) out.push_back(x);
  for (const auto& l : labels) out.push_back(g.index_of(l));
  return out;
}

void emit(const RunConfig& c, const std::string& data, std::ostream& out) {
  if (c.out.empty()) {
    out << data;
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw ConfigError("cannot write '" + c.out + "'");
  file << data;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::size_t longest_support(const Family& family, const EngineOptions& opts) {
  std::size_t longest = 0;
  for (const auto& m : family) longest = std::max(longest, materialize(m.eval, opts.tail_tol).weights.size());
  return longest;
}

std::string default_family(const Instance& inst) {
  if (const auto* p = std::get_if<Problem>(&inst)) {
    if (p->is_finite()) return "cesaro:1.." + std::to_string(default_vstar_family(*p).size());
    // The capped tree reproduces the uncapped one only for averages up to the cap.
    if (p->generator().name() == "example2_tree") return "cesaro:1.." + std::to_string(p->generator().branching_cap() - 1);
    return "cesaro:1.." + std::to_string(std::min<std::size_t>(64, *p->depth_cap() / 2));
  }
  return "cesaro:1..64";
}

void warn_family(const FamilyDiagnostics& d, std::ostream& err) {
  if (d.impatient)
    err << "warning: smallest TV in the family is " << format_number(d.min_tv)
        << "; the inf-sup is only an upper bound on v*\n";
  if (d.irregular) err << "warning: family TV is not regular (some TV more than doubles)\n";
}

Json family_json(const std::string& spec, const FamilyDiagnostics& d) {
  Json j;
  j["family"] = spec;
  j["min_tv"] = number(d.min_tv);
  j["final_tv"] = number(d.final_tv);
  j["impatient"] = d.impatient;
  j["irregular"] = d.irregular;
  return j;
}

int cmd_value(const RunConfig& c, std::ostream& out) {
  const EngineOptions opts = engine_options(c);
  const Instance inst = load(c);
  if (c.eval.empty()) throw ConfigError("--eval is required");
  const Evaluation theta = parse_evaluation(c.eval);
  Json result = Json::object();
  if (const auto* g = std::get_if<GamblingHouse>(&inst)) {
    const HouseValues hv = gh_value_function(*g, theta, opts);
    for (std::size_t x : select_house_states(*g, c.states))
      result[g->names()[x]] = Json{{"value", number(hv.values[x])}, {"error", number(hv.error)}};
  } else {
    const Problem& p = std::get<Problem>(inst);
    const auto states = select_states(p, c.states);
    const auto bounds = values(p, theta, states, opts);
    for (std::size_t i = 0; i < states.size(); ++i)
      result[p.label(states[i])] = Json{{"value", number(bounds[i].value)}, {"error", number(bounds[i].error)}};
  }
  emit(c, dump(result), out);
  return kOk;
}

int cmd_vstar(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const EngineOptions opts = engine_options(c);
  const Instance inst = load(c);
  if (c.families.size() > 1) throw ConfigError("vstar takes a single --family");
  const std::string spec = c.families.empty() ? default_family(inst) : c.families.front();
  const Family family = parse_family(spec);
  Json result;
  if (const auto* g = std::get_if<GamblingHouse>(&inst)) {
    const HouseVStar vs = gh_v_star(*g, family, c.m0.value_or(1000), opts);
    warn_family(vs.family, err);
    result = family_json(spec, vs.family);
    Json states = Json::object();
    for (std::size_t x : select_house_states(*g, c.states)) {
      states[g->names()[x]] = Json{{"lower", number(vs.lower[x])},
                                   {"upper", number(vs.upper[x])},
                                   {"exact", vs.lower[x] >= vs.upper[x]},
                                   {"witness_k", vs.witness_k[x]}};
      if (vs.lower[x] < vs.upper[x])
        err << "note: v*(" << g->names()[x] << ") is only bracketed on this house\n";
    }
    result["states"] = states;
  } else {
    const Problem& p = std::get<Problem>(inst);
    const auto states = select_states(p, c.states);
    VStarReport vs;
    std::optional<std::size_t> used_m;
    if (p.is_finite() && !c.m0) {
      vs = v_star_finite(p, states, family, opts);
    } else {
      std::size_t m_max = 0;
      if (c.m0) {
        m_max = *c.m0;
      } else {
        const std::size_t depth = *p.depth_cap(), longest = longest_support(family, opts);
        if (longest > depth) throw CapExceeded("family support exceeds the depth cap");
        m_max = depth - longest;
      }
      vs = v_star_truncated(p, states, family, m_max, opts);
      used_m = m_max;
    }
    warn_family(vs.family, err);
    result = family_json(spec, vs.family);
    if (used_m) result["m_max"] = *used_m;
    Json js = Json::object();
    for (const auto& e : vs.estimates)
      js[p.label(e.state)] = Json{{"vstar", number(e.value)},
                                  {"error", number(e.error)},
                                  {"witness_k", e.witness_k},
                                  {"witness_state", p.label(e.witness_state)},
                                  {"sup_exact", e.sup_exact}};
    result["states"] = js;
  }
  emit(c, dump(result), out);
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SuiteOptions so;
  so.engine = engine_options(c);
  so.seeds = parse_seeds(c.seeds);
  std::optional<Instance> inst;
  if (!c.instance.empty()) inst = load(c);
  const auto& names = suite_names();
  if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end())
    throw ConfigError("unknown suite '" + c.suite + "'");
  const auto rows = run_suite(c.suite, so, inst);
  Json checks = Json::array();
  std::size_t violations = 0;
  for (const auto& r : rows) {
    checks.push_back(Json{{"check", r.check},
                          {"instance", r.instance},
                          {"max_violation", number(r.value)},
                          {"budget", number(r.budget)},
                          {"holds", r.holds}});
    if (!r.holds) {
      ++violations;
      err << "violation: " << r.check << " on " << r.instance << ": " << format_number(r.value) << " > "
          << format_number(r.budget) << "\n";
    }
  }
  if (rows.empty()) err << "warning: the suite has no check applicable to this instance\n";
  Json result;
  result["suite"] = c.suite;
  result["checks"] = checks;
  result["violations"] = violations;
  emit(c, dump(result), out);
  return violations == 0 ? kOk : kVerificationFailed;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const EngineOptions opts = engine_options(c);
  const Instance inst = load(c);
  const auto* pp = std::get_if<Problem>(&inst);
  if (!pp) throw ConfigError("sweep needs a deterministic problem");
  const Problem& p = *pp;
  if (c.families.empty()) throw ConfigError("sweep needs at least one --family");
  std::vector<NamedFamily> families;
  for (const auto& spec : c.families) families.push_back({spec, parse_family(spec)});
  const auto states = select_states(p, c.states);

  VStarReport ref;
  if (p.is_finite() && !c.m0) {
    ref = v_star_finite(p, states, default_vstar_family(p), opts);
  } else {
    std::size_t longest = 0;
    for (const auto& f : families) longest = std::max(longest, longest_support(f.members, opts));
    const std::size_t depth = p.depth_cap().value_or(longest + 1000);
    if (!c.m0 && longest > depth) throw CapExceeded("family support exceeds the depth cap");
    ref = v_star_truncated(p, states, families.front().members, c.m0.value_or(depth - longest), opts);
  }
  std::vector<double> vstar;
  for (const auto& e : ref.estimates) vstar.push_back(e.value);

  SweepOptions so;
  so.engine = opts;
  const SweepResult result = convergence_sweep(p, families, states, vstar, so);

  std::ostringstream csv;
  write_sweep_csv(p, result, csv);

  Json summary;
  Json ref_json = Json::object();
  for (std::size_t i = 0; i < states.size(); ++i) ref_json[p.label(states[i])] = number(vstar[i]);
  summary["vstar"] = ref_json;
  Json fams = Json::array();
  for (const auto& s : result.summaries) {
    Json f;
    f["family"] = s.family;
    auto series = [](const std::vector<double>& v) {
      Json a = Json::array();
      for (double x : v) a.push_back(number(x));
      return a;
    };
    f["k"] = s.ks;
    f["tv"] = series(s.tv);
    f["sup_weight"] = series(s.sup_weight);
    f["dist_to_vstar"] = series(s.dist_to_vstar);
    f["sup_value"] = series(s.sup_value);
    f["final_tv"] = number(s.tv.empty() ? 0.0 : s.tv.back());
    f["final_dist_to_vstar"] = number(s.dist_to_vstar.empty() ? 0.0 : s.dist_to_vstar.back());
    f["tail_cauchy"] = number(s.tail_cauchy);
    f["tv_vanishing"] = s.tv_vanishing;
    f["oscillating"] = s.oscillating;
    fams.push_back(f);
    if (s.oscillating) err << "note: family " << s.family << " oscillates (tail Cauchy gap "
                           << format_number(s.tail_cauchy) << ")\n";
  }
  summary["families"] = fams;

  if (c.out.empty()) {
    out << csv.str();
    err << dump(summary);
  } else {
    emit(c, csv.str(), out);
    out << dump(summary);
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--params", c.params, "Instance parameters as a JSON object");
  sub->add_option("--tail-tol", c.tail_tol, "Mass allowed beyond a truncated evaluation");
  sub->add_option("--fixpoint-tol", c.fixpoint_tol, "Accuracy of discounted fixed points");
  sub->add_option("--out", c.out, "Write data to this file instead of stdout");
}

void add_states(CLI::App* sub, RunConfig& c) {
  sub->add_option("--state,--states", c.states, "State labels (repeatable or comma separated)")
      ->delimiter(',')
      ->allow_extra_args(false);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Values, limit values and checks for dynamic programming problems", "dplimit"};
  app.require_subcommand(1);

  auto* value = app.add_subcommand("value", "Value of an evaluation at the given states");
  value->add_option("--instance", c.instance, "Registry name, JSON file or inline JSON")->required();
  value->add_option("--eval", c.eval, "Evaluation as JSON")->required();
  add_states(value, c);
  add_common(value, c);

  auto* vstar = app.add_subcommand("vstar", "Limit value v* over a family of evaluations");
  vstar->add_option("--instance", c.instance, "Registry name, JSON file or inline JSON")->required();
  vstar->add_option("--family", c.families, "Family spec such as cesaro:2..40");
  vstar->add_option("--m0", c.m0, "Largest delay for generated problems and houses");
  add_states(vstar, c);
  add_common(vstar, c);

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", c.suite, "Suite name or all");
  verify->add_option("--seeds", c.seeds, "Seeds as A..B or a,b,c");
  verify->add_option("--instance", c.instance, "Check this instance only");
  add_common(verify, c);

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over families; CSV output");
  sweep->add_option("--instance", c.instance, "Registry name, JSON file or inline JSON")->required();
  sweep->add_option("--family", c.families, "Family spec (repeatable)")->required();
  sweep->add_option("--m0", c.m0, "Largest delay for the v* reference");
  add_states(sweep, c);
  add_common(sweep, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (value->parsed()) return cmd_value(c, out);
    if (vstar->parsed()) return cmd_vstar(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out, err);
    return cmd_sweep(c, out, err);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ExplosionGuard& e) {
    err << "error: " << e.what() << "\n";
    return kResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace dplimit::cli
