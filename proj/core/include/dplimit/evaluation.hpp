#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dplimit {

class Evaluation;

namespace detail {

struct WeightsRep {
  std::vector<double> w;
  bool operator==(const WeightsRep&) const = default;
};
struct CesaroRep {
  std::int64_t n;
  bool operator==(const CesaroRep&) const = default;
};
struct DiscountedRep {
  double lambda;
  bool operator==(const DiscountedRep&) const = default;
};
struct DiracRep {
  std::int64_t t;
  bool operator==(const DiracRep&) const = default;
};
// base is never itself delayed nor a Dirac mass (both fold into m).
struct DelayedRep {
  std::int64_t m;
  std::shared_ptr<const Evaluation> base;
  bool operator==(const DelayedRep& other) const;
};

}  // namespace detail

enum class EvaluationKind { kWeights, kCesaro, kDiscounted, kDirac, kDelayed };

/// A probability distribution over the stages 1, 2, 3, ... used to weight
/// the stream of rewards of a play.
///
/// Parametric kinds keep their parameters so that total variation, shift and
/// block averages are evaluated in closed form; materialize() is the only
/// place a discounted evaluation gets truncated. Values are immutable.
class Evaluation {
 public:
  /// Explicit weights (theta_1, ..., theta_T). Trailing zeros are trimmed.
  /// Throws InvalidEvaluation unless all weights are >= 0 and sum to 1
  /// within 1e-12.
  static Evaluation weights(std::vector<double> w);
  /// Uniform weight 1/n on stages 1..n.
  static Evaluation cesaro(std::int64_t n);
  /// theta_t = lambda (1 - lambda)^(t-1), lambda in (0, 1].
  static Evaluation discounted(double lambda);
  /// All mass on stage t >= 1.
  static Evaluation dirac(std::int64_t t);

  EvaluationKind kind() const;

  /// theta_t for t >= 1 (0 for t < 1).
  double weight(std::int64_t t) const;
  double first() const { return weight(1); }
  /// Last stage carrying positive weight; nullopt for infinite support.
  std::optional<std::int64_t> support() const;
  /// sup_t theta_t.
  double sup_weight() const;

  // Parameter accessors; each throws std::bad_variant_access on the wrong kind.
  std::int64_t cesaro_n() const;
  double discount() const;
  std::int64_t dirac_stage() const;
  const std::vector<double>& explicit_weights() const;
  std::int64_t delay_amount() const;
  const Evaluation& delay_base() const;

  std::string describe() const;

  bool operator==(const Evaluation& other) const { return rep_ == other.rep_; }

 private:
  using Rep = std::variant<detail::WeightsRep, detail::CesaroRep, detail::DiscountedRep,
                           detail::DiracRep, detail::DelayedRep>;
  explicit Evaluation(Rep rep) : rep_(std::move(rep)) {}

  friend Evaluation delay(const Evaluation& theta, std::int64_t m);
  friend Evaluation shift(const Evaluation& theta);
  friend double total_variation(const Evaluation& theta);

  Rep rep_;
};

/// TV(theta) = sum_{t>=1} |theta_{t+1} - theta_t|. Closed form for cesaro
/// (1/n) and discounted (lambda). For a delay m >= 1 the rise from the
/// leading zeros is counted, so TV(delay(theta, m)) = TV(theta) + theta_1.
double total_variation(const Evaluation& theta);

/// theta^+ = (theta_{t+1} / (1 - theta_1))_t. Throws DegenerateEvaluation
/// when theta_1 = 1.
Evaluation shift(const Evaluation& theta);

/// The evaluation sum_t theta_t delta_{m+t}. delay(theta, 0) == theta and
/// nested delays fold into one.
Evaluation delay(const Evaluation& theta, std::int64_t m);

/// sum_{t > T} theta_t, in closed form where one exists.
double mass_after(const Evaluation& theta, std::int64_t T);

/// Arithmetic mean of theta_1..theta_T.
double block_average(const Evaluation& theta, std::int64_t T);

struct Materialized {
  std::vector<double> weights;
  // Mass on stages after weights.size(); exactly 0 for finite supports.
  double tail_mass = 0.0;
};

/// Finite prefix carrying all but at most tail_tol of the mass. For
/// discounted(lambda) the prefix length is ceil(log(tail_tol) / log(1 - lambda)).
Materialized materialize(const Evaluation& theta, double tail_tol);

}  // namespace dplimit
