#include <benchmark/benchmark.h>

#include "dplimit/dplimit.hpp"

namespace {

void BM_ValueFunctionCesaro(benchmark::State& state) {
  const auto p = dplimit::random_problem(static_cast<std::size_t>(state.range(0)), 4, 7);
  const auto theta = dplimit::Evaluation::cesaro(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::value_function(p, theta));
  state.SetComplexityN(state.range(0) * state.range(1));
}
BENCHMARK(BM_ValueFunctionCesaro)->Args({10, 100})->Args({100, 100})->Args({100, 1000})->Args({1000, 1000});

void BM_ValueFunctionDiscounted(benchmark::State& state) {
  const auto p = dplimit::random_problem(100, 4, 7);
  const auto theta = dplimit::Evaluation::discounted(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::value_function(p, theta));
}
BENCHMARK(BM_ValueFunctionDiscounted)->Arg(10)->Arg(100)->Arg(1000);

void BM_DiscountedFixpoint(benchmark::State& state) {
  const auto p = dplimit::random_problem(100, 4, 7);
  const double lambda = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::value_discounted_fixpoint(p, lambda, 1e-9));
}
BENCHMARK(BM_DiscountedFixpoint)->Arg(10)->Arg(100);

void BM_TreeCesaroAtRoot(benchmark::State& state) {
  const auto tree = dplimit::example2_tree(8, 64);
  const auto root = tree.parse("root");
  const auto theta = dplimit::Evaluation::cesaro(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::value(tree, theta, root));
}
BENCHMARK(BM_TreeCesaroAtRoot)->Arg(8)->Arg(32)->Arg(64);

void BM_OracleEnumeration(benchmark::State& state) {
  const auto p = dplimit::random_problem(6, 3, 3);
  const auto theta = dplimit::Evaluation::cesaro(state.range(0));
  const auto z = dplimit::Problem::finite_state(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dplimit::brute_value(p, theta, z, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_OracleEnumeration)->Arg(4)->Arg(8);

void BM_VStarFinite(benchmark::State& state) {
  const auto p = dplimit::random_problem(static_cast<std::size_t>(state.range(0)), 3, 11);
  const auto family = dplimit::default_vstar_family(p);
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::v_star_finite(p, {}, family));
}
BENCHMARK(BM_VStarFinite)->Arg(10)->Arg(50);

void BM_HouseValues(benchmark::State& state) {
  const auto g = dplimit::random_house(static_cast<std::size_t>(state.range(0)), 3, 5);
  const auto theta = dplimit::Evaluation::cesaro(100);
  for (auto _ : state) benchmark::DoNotOptimize(dplimit::gh_value_function(g, theta));
}
BENCHMARK(BM_HouseValues)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
