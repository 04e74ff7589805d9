#include "dplimit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dplimit/errors.hpp"

namespace dplimit {

namespace {

constexpr double kSumTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double explicit_tv(const std::vector<double>& w) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) tv += std::abs(w[i + 1] - w[i]);
  if (!w.empty()) tv += w.back();  // final drop to the implicit zero
  return tv;
}

}  // namespace

bool detail::DelayedRep::operator==(const DelayedRep& other) const {
  return m == other.m && *base == *other.base;
}

Evaluation Evaluation::weights(std::vector<double> w) {
  while (!w.empty() && w.back() == 0.0) w.pop_back();
  if (w.empty()) throw InvalidEvaluation("explicit evaluation has no positive weight");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0)
      throw InvalidEvaluation("explicit evaluation has a negative or non-finite weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "explicit evaluation weights sum to " << sum << ", not 1";
    throw InvalidEvaluation(msg.str());
  }
  return Evaluation(detail::WeightsRep{std::move(w)});
}

Evaluation Evaluation::cesaro(std::int64_t n) {
  if (n < 1) throw InvalidEvaluation("cesaro evaluation needs n >= 1");
  return Evaluation(detail::CesaroRep{n});
}

Evaluation Evaluation::discounted(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw InvalidEvaluation("discounted evaluation needs lambda in (0, 1]");
  return Evaluation(detail::DiscountedRep{lambda});
}

Evaluation Evaluation::dirac(std::int64_t t) {
  if (t < 1) throw InvalidEvaluation("dirac evaluation needs t >= 1");
  return Evaluation(detail::DiracRep{t});
}

EvaluationKind Evaluation::kind() const {
  return static_cast<EvaluationKind>(rep_.index());
}

double Evaluation::weight(std::int64_t t) const {
  if (t < 1) return 0.0;
  return std::visit(
      Overloaded{
          [t](const detail::WeightsRep& r) {
            return t <= static_cast<std::int64_t>(r.w.size()) ? r.w[t - 1] : 0.0;
          },
          [t](const detail::CesaroRep& r) {
            return t <= r.n ? 1.0 / static_cast<double>(r.n) : 0.0;
          },
          [t](const detail::DiscountedRep& r) {
            if (r.lambda == 1.0) return t == 1 ? 1.0 : 0.0;
            return r.lambda * std::pow(1.0 - r.lambda, static_cast<double>(t - 1));
          },
          [t](const detail::DiracRep& r) { return t == r.t ? 1.0 : 0.0; },
          [t](const detail::DelayedRep& r) { return r.base->weight(t - r.m); },
      },
      rep_);
}

std::optional<std::int64_t> Evaluation::support() const {
  return std::visit(
      Overloaded{
          [](const detail::WeightsRep& r) -> std::optional<std::int64_t> {
            return static_cast<std::int64_t>(r.w.size());
          },
          [](const detail::CesaroRep& r) -> std::optional<std::int64_t> { return r.n; },
          [](const detail::DiscountedRep& r) -> std::optional<std::int64_t> {
            if (r.lambda == 1.0) return 1;
            return std::nullopt;
          },
          [](const detail::DiracRep& r) -> std::optional<std::int64_t> { return r.t; },
          [](const detail::DelayedRep& r) -> std::optional<std::int64_t> {
            auto s = r.base->support();
            if (!s) return std::nullopt;
            return *s + r.m;
          },
      },
      rep_);
}

double Evaluation::sup_weight() const {
  return std::visit(
      Overloaded{
          [](const detail::WeightsRep& r) { return *std::max_element(r.w.begin(), r.w.end()); },
          [](const detail::CesaroRep& r) { return 1.0 / static_cast<double>(r.n); },
          [](const detail::DiscountedRep& r) { return r.lambda; },
          [](const detail::DiracRep&) { return 1.0; },
          [](const detail::DelayedRep& r) { return r.base->sup_weight(); },
      },
      rep_);
}

std::int64_t Evaluation::cesaro_n() const { return std::get<detail::CesaroRep>(rep_).n; }
double Evaluation::discount() const { return std::get<detail::DiscountedRep>(rep_).lambda; }
std::int64_t Evaluation::dirac_stage() const { return std::get<detail::DiracRep>(rep_).t; }
const std::vector<double>& Evaluation::explicit_weights() const {
  return std::get<detail::WeightsRep>(rep_).w;
}
std::int64_t Evaluation::delay_amount() const { return std::get<detail::DelayedRep>(rep_).m; }
const Evaluation& Evaluation::delay_base() const {
  return *std::get<detail::DelayedRep>(rep_).base;
}

std::string Evaluation::describe() const {
  std::ostringstream out;
  out.precision(12);
  std::visit(Overloaded{
                 [&](const detail::WeightsRep& r) { out << "weights[" << r.w.size() << "]"; },
                 [&](const detail::CesaroRep& r) { out << "cesaro(" << r.n << ")"; },
                 [&](const detail::DiscountedRep& r) { out << "discounted(" << r.lambda << ")"; },
                 [&](const detail::DiracRep& r) { out << "dirac(" << r.t << ")"; },
                 [&](const detail::DelayedRep& r) {
                   out << "delayed(" << r.m << "," << r.base->describe() << ")";
                 },
             },
             rep_);
  return out.str();
}

double total_variation(const Evaluation& theta) {
  return std::visit(
      Overloaded{
          [](const detail::WeightsRep& r) { return explicit_tv(r.w); },
          [](const detail::CesaroRep& r) { return 1.0 / static_cast<double>(r.n); },
          [](const detail::DiscountedRep& r) { return r.lambda; },
          [](const detail::DiracRep& r) { return r.t == 1 ? 1.0 : 2.0; },
          [](const detail::DelayedRep& r) {
            return total_variation(*r.base) + r.base->first();
          },
      },
      theta.rep_);
}

Evaluation shift(const Evaluation& theta) {
  return std::visit(
      Overloaded{
          [](const detail::WeightsRep& r) {
            const double rest = 1.0 - r.w.front();
            if (r.w.size() < 2 || rest <= kSumTolerance)
              throw DegenerateEvaluation("cannot shift an evaluation with theta_1 = 1");
            std::vector<double> w(r.w.begin() + 1, r.w.end());
            // Renormalize against the actual remaining mass so the result
            // sums to 1 even when the input carried rounding residue.
            const double mass = std::accumulate(w.begin(), w.end(), 0.0);
            for (double& x : w) x /= mass;
            return Evaluation::weights(std::move(w));
          },
          [](const detail::CesaroRep& r) {
            if (r.n == 1) throw DegenerateEvaluation("cannot shift cesaro(1)");
            return Evaluation::cesaro(r.n - 1);
          },
          [&theta](const detail::DiscountedRep& r) {
            if (r.lambda == 1.0) throw DegenerateEvaluation("cannot shift discounted(1)");
            return theta;
          },
          [](const detail::DiracRep& r) {
            if (r.t == 1) throw DegenerateEvaluation("cannot shift dirac(1)");
            return Evaluation::dirac(r.t - 1);
          },
          [](const detail::DelayedRep& r) { return delay(*r.base, r.m - 1); },
      },
      theta.rep_);
}

Evaluation delay(const Evaluation& theta, std::int64_t m) {
  if (m < 0) throw InvalidEvaluation("delay must be nonnegative");
  if (m == 0) return theta;
  if (const auto* d = std::get_if<detail::DiracRep>(&theta.rep_))
    return Evaluation::dirac(d->t + m);
  if (const auto* d = std::get_if<detail::DelayedRep>(&theta.rep_))
    return Evaluation(detail::DelayedRep{d->m + m, d->base});
  return Evaluation(detail::DelayedRep{m, std::make_shared<const Evaluation>(theta)});
}

double mass_after(const Evaluation& theta, std::int64_t T) {
  if (T <= 0) return 1.0;
  switch (theta.kind()) {
    case EvaluationKind::kDiscounted:
      return std::pow(1.0 - theta.discount(), static_cast<double>(T));
    case EvaluationKind::kCesaro: {
      const std::int64_t n = theta.cesaro_n();
      return T >= n ? 0.0 : static_cast<double>(n - T) / static_cast<double>(n);
    }
    case EvaluationKind::kDirac:
      return T >= theta.dirac_stage() ? 0.0 : 1.0;
    case EvaluationKind::kDelayed:
      return mass_after(theta.delay_base(), T - theta.delay_amount());
    case EvaluationKind::kWeights: {
      const auto& w = theta.explicit_weights();
      double rest = 0.0;
      for (std::size_t t = static_cast<std::size_t>(T); t < w.size(); ++t) rest += w[t];
      return rest;
    }
  }
  return 0.0;
}

double block_average(const Evaluation& theta, std::int64_t T) {
  if (T < 1) throw InvalidEvaluation("block average needs T >= 1");
  if (theta.kind() == EvaluationKind::kDiscounted) {
    const double q = 1.0 - theta.discount();
    return (1.0 - std::pow(q, static_cast<double>(T))) / static_cast<double>(T);
  }
  std::int64_t upto = T;
  if (auto s = theta.support()) upto = std::min(T, *s);
  double sum = 0.0;
  for (std::int64_t t = 1; t <= upto; ++t) sum += theta.weight(t);
  return sum / static_cast<double>(T);
}

Materialized materialize(const Evaluation& theta, double tail_tol) {
  if (!(tail_tol > 0.0)) throw InvalidEvaluation("tail tolerance must be positive");
  Materialized out;
  switch (theta.kind()) {
    case EvaluationKind::kWeights:
      out.weights = theta.explicit_weights();
      break;
    case EvaluationKind::kCesaro:
      out.weights.assign(static_cast<std::size_t>(theta.cesaro_n()),
                         1.0 / static_cast<double>(theta.cesaro_n()));
      break;
    case EvaluationKind::kDirac:
      out.weights.assign(static_cast<std::size_t>(theta.dirac_stage()), 0.0);
      out.weights.back() = 1.0;
      break;
    case EvaluationKind::kDiscounted: {
      const double lambda = theta.discount();
      if (lambda == 1.0) {
        out.weights = {1.0};
        break;
      }
      const double q = 1.0 - lambda;
      auto T = static_cast<std::int64_t>(std::ceil(std::log(tail_tol) / std::log(q)));
      T = std::max<std::int64_t>(T, 1);
      while (std::pow(q, static_cast<double>(T)) > tail_tol) ++T;
      out.weights.resize(static_cast<std::size_t>(T));
      for (std::int64_t t = 1; t <= T; ++t)
        out.weights[t - 1] = lambda * std::pow(q, static_cast<double>(t - 1));
      out.tail_mass = std::pow(q, static_cast<double>(T));
      break;
    }
    case EvaluationKind::kDelayed: {
      Materialized base = materialize(theta.delay_base(), tail_tol);
      out.weights.assign(static_cast<std::size_t>(theta.delay_amount()), 0.0);
      out.weights.insert(out.weights.end(), base.weights.begin(), base.weights.end());
      out.tail_mass = base.tail_mass;
      break;
    }
  }
  return out;
}

}  // namespace dplimit
