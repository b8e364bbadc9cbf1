#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lifnet/experiment.hpp"
#include "lifnet/hpo.hpp"

namespace lifnet {

struct BenchmarkOptions {
  std::vector<Rule> rules{Rule::sgl, Rule::tempotron, Rule::bal};
  std::size_t n_trials = 10;
  std::size_t parallelism = 1;
  RunSpec base;  // epochs and fixed parameters; base.seed seeds every study
  SearchSpace space;
  std::string dataset;  // free-form descriptor copied into the report
};

struct BenchmarkRow {
  Rule rule = Rule::sgl;
  bool ok = false;
  std::string error;  // set when !ok
  std::optional<TrialParams> best_params;
  std::size_t best_trial_id = 0;
  std::size_t trials_failed = 0;
  double val_accuracy_pct = 0.0;
  double train_time_seconds = 0.0;  // retraining of the best configuration
  double study_wall_time_seconds = 0.0;
  std::optional<std::size_t> labels_queried;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::uint64_t seed = 0;
  std::size_t n_trials = 0;
  std::size_t epochs = 0;
  std::string dataset;
  std::string machine;
  std::string timestamp;  // UTC, ISO 8601

  bool all_failed() const;
};

/// For each rule: a study over `options.space` on the shared split, then the
/// best configuration retrained with its trial seed and timed. A rule whose
/// study fails becomes a failed row.
BenchmarkReport run_benchmark(const BenchmarkOptions& options, const TrainingData& data);

/// Markdown table: rule, validation accuracy (%), training time (s).
std::string to_markdown(const BenchmarkReport& report);

/// "<os> <arch>, <n> hardware threads, <compiler>".
std::string machine_descriptor();
std::string utc_timestamp();

}  // namespace lifnet
