#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dplimit/errors.hpp"
#include "dplimit/evaluation.hpp"
#include "reference.hpp"

using dplimit::Evaluation;
using dplimit::EvaluationKind;

namespace {

std::vector<double> prefix(const Evaluation& theta, std::int64_t len) {
  std::vector<double> w;
  for (std::int64_t t = 1; t <= len; ++t) w.push_back(theta.weight(t));
  return w;
}

}  // namespace

TEST(EvaluationTest, RejectsMalformedParameters) {
  EXPECT_THROW(Evaluation::weights({}), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::weights({0.5, 0.4}), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::weights({1.5, -0.5}), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::weights({std::nan(""), 1.0}), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::cesaro(0), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::discounted(0.0), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::discounted(1.5), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::discounted(std::nan("")), dplimit::InvalidEvaluation);
  EXPECT_THROW(Evaluation::dirac(0), dplimit::InvalidEvaluation);
  EXPECT_THROW(dplimit::delay(Evaluation::cesaro(2), -1), dplimit::InvalidEvaluation);
}

TEST(EvaluationTest, WeightsTrimTrailingZeros) {
  const auto theta = Evaluation::weights({0.25, 0.75, 0.0, 0.0});
  EXPECT_EQ(theta.support(), 2);
  EXPECT_EQ(theta.explicit_weights().size(), 2u);
  EXPECT_EQ(theta.weight(3), 0.0);
  EXPECT_EQ(theta.weight(0), 0.0);
}

TEST(EvaluationTest, ParametricWeights) {
  const auto c = Evaluation::cesaro(4);
  EXPECT_EQ(c.weight(1), 0.25);
  EXPECT_EQ(c.weight(4), 0.25);
  EXPECT_EQ(c.weight(5), 0.0);
  const auto d = Evaluation::discounted(0.25);
  EXPECT_DOUBLE_EQ(d.weight(3), 0.25 * 0.75 * 0.75);
  EXPECT_FALSE(d.support().has_value());
  EXPECT_EQ(Evaluation::discounted(1.0).support(), 1);
  EXPECT_EQ(Evaluation::dirac(3).weight(3), 1.0);
  EXPECT_EQ(Evaluation::dirac(3).first(), 0.0);
}

TEST(EvaluationTest, TotalVariationClosedFormsMatchDirectSums) {
  for (std::int64_t n = 1; n <= 300; ++n) {
    const auto c = Evaluation::cesaro(n);
    EXPECT_EQ(dplimit::total_variation(c), 1.0 / static_cast<double>(n));
    EXPECT_NEAR(dplimit::total_variation(c), ref::tv(prefix(c, n)), 1e-12);
  }
  for (double lambda : {1.0, 0.5, 0.2, 0.05}) {
    const auto d = Evaluation::discounted(lambda);
    EXPECT_EQ(dplimit::total_variation(d), lambda);
    EXPECT_NEAR(ref::tv(prefix(d, 2000)), lambda, 1e-9);
  }
  EXPECT_EQ(dplimit::total_variation(Evaluation::dirac(1)), 1.0);
  for (std::int64_t t = 2; t <= 20; ++t) {
    EXPECT_EQ(dplimit::total_variation(Evaluation::dirac(t)), 2.0);
    EXPECT_EQ(ref::tv(prefix(Evaluation::dirac(t), t)), 2.0);
  }
}

TEST(EvaluationTest, TotalVariationOfDelayCountsTheRise) {
  ref::Rng rng{7};
  for (int trial = 0; trial < 200; ++trial) {
    const auto base = Evaluation::weights(ref::random_weights(rng, 1 + rng.below(8)));
    const std::int64_t m = static_cast<std::int64_t>(rng.below(5));
    const auto delayed = dplimit::delay(base, m);
    const auto len = *delayed.support();
    EXPECT_NEAR(dplimit::total_variation(delayed), ref::tv(prefix(delayed, len)), 1e-12);
    if (m >= 1) EXPECT_NEAR(dplimit::total_variation(delayed), dplimit::total_variation(base) + base.first(), 1e-15);
    EXPECT_LE(dplimit::total_variation(delayed), 2.0 * dplimit::total_variation(base) + 1e-15);
  }
}

TEST(EvaluationTest, ShiftRenormalizesTheTail) {
  const auto s = dplimit::shift(Evaluation::weights({0.5, 0.25, 0.25}));
  EXPECT_EQ(s.explicit_weights(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(dplimit::shift(Evaluation::cesaro(5)), Evaluation::cesaro(4));
  EXPECT_EQ(dplimit::shift(Evaluation::discounted(0.3)), Evaluation::discounted(0.3));
  EXPECT_EQ(dplimit::shift(Evaluation::dirac(4)), Evaluation::dirac(3));
  EXPECT_EQ(dplimit::shift(dplimit::delay(Evaluation::cesaro(3), 2)), dplimit::delay(Evaluation::cesaro(3), 1));
  EXPECT_EQ(dplimit::shift(dplimit::delay(Evaluation::cesaro(3), 1)), Evaluation::cesaro(3));
}

TEST(EvaluationTest, ShiftOfAPointMassAtStageOneIsDegenerate) {
  EXPECT_THROW(dplimit::shift(Evaluation::dirac(1)), dplimit::DegenerateEvaluation);
  EXPECT_THROW(dplimit::shift(Evaluation::cesaro(1)), dplimit::DegenerateEvaluation);
  EXPECT_THROW(dplimit::shift(Evaluation::discounted(1.0)), dplimit::DegenerateEvaluation);
  EXPECT_THROW(dplimit::shift(Evaluation::weights({1.0})), dplimit::DegenerateEvaluation);
}

TEST(EvaluationTest, ShiftMatchesDefinitionOnRandomWeights) {
  ref::Rng rng{11};
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = ref::random_weights(rng, 2 + rng.below(8));
    const auto theta = Evaluation::weights(w);
    if (theta.first() >= 1.0 - 1e-12) continue;
    const auto s = dplimit::shift(theta);
    for (std::int64_t t = 1; t <= 10; ++t)
      EXPECT_NEAR(s.weight(t), theta.weight(t + 1) / (1.0 - theta.first()), 1e-12);
  }
}

TEST(EvaluationTest, DelayFoldsStructurally) {
  const auto c = Evaluation::cesaro(3);
  EXPECT_EQ(dplimit::delay(c, 0), c);
  EXPECT_EQ(dplimit::delay(Evaluation::dirac(2), 3), Evaluation::dirac(5));
  EXPECT_EQ(dplimit::delay(dplimit::delay(c, 2), 3), dplimit::delay(c, 5));
  const auto d = dplimit::delay(c, 4);
  EXPECT_EQ(d.kind(), EvaluationKind::kDelayed);
  EXPECT_EQ(d.delay_amount(), 4);
  EXPECT_EQ(d.delay_base(), c);
  EXPECT_EQ(d.describe(), "delayed(4,cesaro(3))");
}

TEST(EvaluationTest, DelayedCesaroPutsUniformMassOnTheSecondBlock) {
  for (std::int64_t k = 1; k <= 12; ++k) {
    const auto theta = dplimit::delay(Evaluation::cesaro(k), k);
    for (std::int64_t t = 1; t <= 3 * k; ++t)
      EXPECT_EQ(theta.weight(t), t > k && t <= 2 * k ? 1.0 / static_cast<double>(k) : 0.0);
    EXPECT_EQ(theta.support(), 2 * k);
  }
}

TEST(EvaluationTest, MassAfterAndBlockAverage) {
  EXPECT_DOUBLE_EQ(dplimit::mass_after(Evaluation::cesaro(4), 1), 0.75);
  EXPECT_EQ(dplimit::mass_after(Evaluation::cesaro(4), 4), 0.0);
  EXPECT_NEAR(dplimit::mass_after(Evaluation::discounted(0.1), 10), std::pow(0.9, 10), 1e-15);
  EXPECT_EQ(dplimit::mass_after(Evaluation::dirac(3), 2), 1.0);
  EXPECT_DOUBLE_EQ(dplimit::mass_after(dplimit::delay(Evaluation::cesaro(2), 2), 3), 0.5);
  EXPECT_DOUBLE_EQ(dplimit::block_average(Evaluation::cesaro(4), 2), 0.25);
  EXPECT_DOUBLE_EQ(dplimit::block_average(Evaluation::cesaro(4), 8), 0.125);
  const auto d = Evaluation::discounted(0.2);
  EXPECT_NEAR(dplimit::block_average(d, 5), (1.0 - std::pow(0.8, 5)) / 5.0, 1e-15);
}

TEST(EvaluationTest, MaterializeDiscountedCertifiesTheTail) {
  for (double lambda : {0.9, 0.5, 0.1, 0.01}) {
    for (double tol : {1e-3, 1e-9}) {
      const auto m = dplimit::materialize(Evaluation::discounted(lambda), tol);
      EXPECT_LE(m.tail_mass, tol);
      EXPECT_NEAR(m.tail_mass, std::pow(1.0 - lambda, static_cast<double>(m.weights.size())), 1e-15);
      const auto expected = static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(1.0 - lambda)));
      EXPECT_LE(m.weights.size(), expected + 1);
      EXPECT_GE(m.weights.size(), expected);
    }
  }
  const auto one = dplimit::materialize(Evaluation::discounted(1.0), 1e-9);
  EXPECT_EQ(one.weights, std::vector<double>{1.0});
  EXPECT_EQ(one.tail_mass, 0.0);
}

TEST(EvaluationTest, MaterializeFiniteKindsIsExact) {
  const auto m = dplimit::materialize(dplimit::delay(Evaluation::cesaro(2), 3), 1e-9);
  EXPECT_EQ(m.weights, (std::vector<double>{0.0, 0.0, 0.0, 0.5, 0.5}));
  EXPECT_EQ(m.tail_mass, 0.0);
  EXPECT_EQ(dplimit::materialize(Evaluation::dirac(3), 1e-9).weights, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(EvaluationTest, SupWeight) {
  EXPECT_EQ(Evaluation::cesaro(8).sup_weight(), 0.125);
  EXPECT_EQ(Evaluation::discounted(0.3).sup_weight(), 0.3);
  EXPECT_EQ(Evaluation::weights({0.2, 0.5, 0.3}).sup_weight(), 0.5);
  EXPECT_EQ(dplimit::delay(Evaluation::cesaro(4), 9).sup_weight(), 0.25);
}
