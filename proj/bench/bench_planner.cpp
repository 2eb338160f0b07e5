// Serial vs OpenMP candidate evaluation, plus trajectory solve throughput.

#include <omp.h>

#include <random>

#include <benchmark/benchmark.h>

#include "mrsearch/action_model.hpp"
#include "mrsearch/guts_planner.hpp"
#include "mrsearch/trajectory.hpp"

using namespace mrsearch;

namespace {

struct Round {
  GridSpec grid;
  ZoneMap map;
  CellEvidence evidence;
  std::vector<CandidateAction> candidates;
  Eigen::VectorXd sample, gamma;

  explicit Round(int n)
      : grid{n, n, 15.0, {}},
        map(grid, ZonePolygon{{{0, 0}, {15.0 * n, 0}, {15.0 * n, 15.0 * n}, {0, 15.0 * n}}}) {
    std::mt19937_64 gen(1);
    std::uniform_int_distribution<int> cell(0, grid.num_cells() - 1);
    SensingDataset d;
    for (int i = 0; i < 2 * grid.num_cells(); ++i) d.append({cell(gen), i % 50 == 0 ? 1.0 : 0.0, 1.0, 0, RecordKind::SelfPosition});
    evidence = accumulate_evidence(d, grid.num_cells());
    const auto post = em_posterior(evidence);
    Rng rng = make_stream(1, {0, 1});
    sample = sample_posterior(post, rng);
    gamma = post.responsibilities;
    candidates = enumerate_candidates(map, grid.center(cell(gen)), 1.0);
  }
};

void BM_EvaluateSerial(benchmark::State& state) {
  const Round r(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_candidates_serial(r.evidence, r.candidates, r.sample, r.gamma, 0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(r.candidates.size()));
}

void BM_EvaluateOpenMP(benchmark::State& state) {
  const Round r(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_candidates(r.evidence, r.candidates, r.sample, r.gamma, 0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(r.candidates.size()));
}

void BM_QuinticSolveAndCheck(benchmark::State& state) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> p(-150.0, 150.0), v(-5.0, 5.0), T(1.0, 40.0);
  for (auto _ : state) {
    const auto s = solve_quintic({p(gen), v(gen), 0.0, p(gen), v(gen), 0.0, T(gen)});
    benchmark::DoNotOptimize(check_limits(s, 10.0, 5.0));
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_EvaluateOpenMP)->ArgsProduct({{10, 20, 40}, {1, 2, 4}})->UseRealTime();
BENCHMARK(BM_QuinticSolveAndCheck);

BENCHMARK_MAIN();
