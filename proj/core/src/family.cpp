#include "dplimit/family.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/json_io.hpp"

namespace dplimit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t to_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidFamily("expected an integer, got '" + std::string(s) + "'");
  return v;
}

double to_double(std::string_view s) {
  const std::string str(trim(s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (str.empty() || used != str.size()) throw InvalidFamily("expected a number, got '" + str + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Family range_family(std::string_view body, const std::function<Evaluation(std::int64_t)>& make) {
  const auto parts = split(body, ':');
  if (parts.size() > 2) throw InvalidFamily("range must read A..B or A..B:step");
  const auto dots = parts[0].find("..");
  if (dots == std::string_view::npos) throw InvalidFamily("range must read A..B");
  const std::int64_t a = to_int(parts[0].substr(0, dots));
  const std::int64_t b = to_int(parts[0].substr(dots + 2));
  const std::int64_t step = parts.size() == 2 ? to_int(parts[1]) : 1;
  if (a < 1 || b < a || step < 1) throw InvalidFamily("range needs 1 <= A <= B and step >= 1");
  if ((b - a) / step >= 1'000'000) throw InvalidFamily("range has too many members");
  Family f;
  for (std::int64_t k = a; k <= b; k += step) {
    try {
      f.push_back({k, make(k)});
    } catch (const InvalidEvaluation& e) {
      throw InvalidFamily(e.what());
    }
  }
  return f;
}

Family discounted_family(std::string_view body) {
  body = trim(body);
  std::vector<double> lambdas;
  if (body.starts_with("geomgrid(")) {
    if (!body.ends_with(")")) throw InvalidFamily("geomgrid needs a closing parenthesis");
    const auto args = split(body.substr(9, body.size() - 10), ',');
    if (args.size() != 3) throw InvalidFamily("geomgrid takes (first, last, count)");
    const double a = to_double(args[0]), b = to_double(args[1]);
    const std::int64_t n = to_int(args[2]);
    if (n < 1 || n > 1'000'000 || !(a > 0.0) || !(b > 0.0)) throw InvalidFamily("geomgrid needs positive ends and count");
    for (std::int64_t i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      lambdas.push_back(i == n - 1 ? b : a * std::pow(b / a, s));
    }
  } else {
    for (auto part : split(body, ',')) lambdas.push_back(to_double(part));
  }
  Family f;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    try {
      f.push_back({static_cast<std::int64_t>(i + 1), Evaluation::discounted(lambdas[i])});
    } catch (const InvalidEvaluation& e) {
      throw InvalidFamily(e.what());
    }
  }
  return f;
}

}  // namespace

Family parse_family(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) throw InvalidFamily("empty family spec");
  if (spec.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidFamily(std::string("malformed family JSON: ") + e.what());
    }
    if (j.empty()) throw InvalidFamily("empty family");
    Family f;
    for (std::size_t i = 0; i < j.size(); ++i) {
      try {
        f.push_back({static_cast<std::int64_t>(i + 1), evaluation_from_json(j[i])});
      } catch (const InvalidEvaluation& e) {
        throw InvalidFamily(e.what());
      }
    }
    return f;
  }
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InvalidFamily("family spec must read kind:range");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (kind == "cesaro") return range_family(body, [](std::int64_t k) { return Evaluation::cesaro(k); });
  if (kind == "dirac") return range_family(body, [](std::int64_t k) { return Evaluation::dirac(k); });
  if (kind == "delayedcesaro")
    return range_family(body, [](std::int64_t k) { return delay(Evaluation::cesaro(k), k); });
  if (kind == "oddcomb") return range_family(body, odd_comb);
  if (kind == "evencomb") return range_family(body, even_comb);
  if (kind == "alternating") return range_family(body, alternating_comb);
  if (kind == "discounted") return discounted_family(body);
  throw InvalidFamily("unknown family kind '" + std::string(kind) + "'");
}

FamilyDiagnostics diagnose_family(const Family& family, double tv_threshold) {
  FamilyDiagnostics d;
  if (family.empty()) return d;
  d.min_tv = std::numeric_limits<double>::infinity();
  double prev = -1.0;
  for (const auto& member : family) {
    const double tv = total_variation(member.eval);
    d.min_tv = std::min(d.min_tv, tv);
    if (prev >= 0.0 && tv > 2.0 * prev + 1e-15) d.irregular = true;
    prev = tv;
  }
  d.final_tv = prev;
  d.impatient = d.min_tv > tv_threshold;
  return d;
}

}  // namespace dplimit
