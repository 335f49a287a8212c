#include <benchmark/benchmark.h>

#include <vector>

#include "unitarizer/circumcenter.hpp"
#include "unitarizer/random.hpp"
#include "unitarizer/representation.hpp"

using namespace unitarizer;

namespace {

void BM_Distance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const SpdPoint a = random_spd(n, 1e3, rng);
  const SpdPoint b = random_spd(n, 1e3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(distance(a, b));
}
BENCHMARK(BM_Distance)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Circumcenter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  Rng rng(2);
  std::vector<SpdPoint> points;
  for (std::size_t i = 0; i < m; ++i) points.push_back(random_spd(n, 100.0, rng));
  const PointSet set = PointSet::enclosing(std::move(points));
  for (auto _ : state) {
    const CircumcenterResult r = solve_circumcenter(set, 1e-7, 100000);
    benchmark::DoNotOptimize(r.center_error_bound);
    state.counters["iterations"] = static_cast<double>(r.iterations);
  }
}
BENCHMARK(BM_Circumcenter)->Args({2, 4})->Args({4, 8})->Args({8, 16})->Unit(benchmark::kMillisecond);

void BM_Unitarize(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto jobs = static_cast<std::size_t>(state.range(1));
  const GroupTable group = GroupTable::symmetric(k);
  const ActionGroupoidSpec spec = ActionGroupoidSpec::regular(group);
  const Representation rho = generate_instance(spec, base_reps::default_for(group, 8), 10.0, 3);
  UnitarizeOptions o;
  o.jobs = jobs;
  for (auto _ : state) benchmark::DoNotOptimize(unitarize(rho, 1e-7, o).report.max_unitarity_residual);
}
BENCHMARK(BM_Unitarize)->Args({3, 1})->Args({3, 4})->Args({4, 1})->Args({4, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
