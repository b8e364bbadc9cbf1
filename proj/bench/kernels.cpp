// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <numeric>
#include <vector>

#include "lifnet/active.hpp"
#include "lifnet/experiment.hpp"
#include "lifnet/training.hpp"

using namespace lifnet;

namespace {

struct Fixture {
  TrainingData data;
  Model model;
  Uncertainty u;
  std::vector<std::size_t> rows;

  Fixture() {
    data = prepare_data(default_dataset(42), 0.8, 42).data;
    RunSpec spec;
    spec.epochs = 2;
    model = run_training(spec, data).first;
    u = Uncertainty::uniform(model.network, 1.0);
    rows.resize(data.train.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void set_threads(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  state.counters["threads"] = static_cast<double>(state.range(0));
}

void BM_evaluate_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_accuracy_serial(f.model, f.data.train));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.data.train.size()));
}

void BM_evaluate_parallel(benchmark::State& state) {
  const auto& f = fixture();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_accuracy(f.model, f.data.train));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.data.train.size()));
}

void BM_bal_scores_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(bal_scores_serial(f.model, f.u, f.data.train, f.rows, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.rows.size()));
}

void BM_bal_scores_parallel(benchmark::State& state) {
  const auto& f = fixture();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(bal_scores(f.model, f.u, f.data.train, f.rows, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.rows.size()));
}

void thread_counts(benchmark::internal::Benchmark* b) {
  const int max = omp_get_num_procs();
  for (int t = 1; t < max; t *= 2) b->Arg(t);
  b->Arg(max);
}

}  // namespace

BENCHMARK(BM_evaluate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_bal_scores_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bal_scores_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
