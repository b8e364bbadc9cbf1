#include "lifnet/benchmark.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <exception>
#include <sstream>
#include <thread>

namespace lifnet {

bool BenchmarkReport::all_failed() const {
  return std::none_of(rows.begin(), rows.end(), [](const BenchmarkRow& r) { return r.ok; });
}

BenchmarkReport run_benchmark(const BenchmarkOptions& options, const TrainingData& data) {
  BenchmarkReport report;
  report.seed = options.base.seed;
  report.n_trials = options.n_trials;
  report.epochs = options.base.epochs;
  report.dataset = options.dataset;
  report.machine = machine_descriptor();
  report.timestamp = utc_timestamp();

  for (const Rule rule : options.rules) {
    BenchmarkRow row;
    row.rule = rule;
    try {
      RunSpec base = options.base;
      base.rule = rule;
      const auto study = run_study(options.space, training_objective(base, data), options.n_trials,
                                   options.parallelism, options.base.seed, rule);
      const Trial& best = study.best();
      RunSpec spec = best.params.apply(base);
      spec.seed = best.seed;
      const auto result = run_training(spec, data).second;

      row.ok = true;
      row.best_params = best.params;
      row.best_trial_id = best.id;
      row.trials_failed = static_cast<std::size_t>(std::count_if(
          study.trials.begin(), study.trials.end(), [](const Trial& t) { return t.status == TrialStatus::failed; }));
      row.val_accuracy_pct = 100.0 * result.final_val_accuracy;
      row.train_time_seconds = result.wall_time_seconds;
      row.study_wall_time_seconds = study.total_wall_time_seconds;
      row.labels_queried = result.labels_queried;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string to_markdown(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "| Rule | Accuracy (%) | Training Time (s) |\n";
  out << "|------|-------------:|------------------:|\n";
  char buf[64];
  for (const auto& row : report.rows) {
    out << "| " << to_string(row.rule) << " | ";
    if (row.ok) {
      std::snprintf(buf, sizeof buf, "%.2f | %.3f |", row.val_accuracy_pct, row.train_time_seconds);
      out << buf << '\n';
    } else {
      out << "failed | - |\n";
    }
  }
  return out.str();
}

std::string machine_descriptor() {
  std::ostringstream out;
  utsname u{};
  if (uname(&u) == 0) {
    out << u.sysname << ' ' << u.machine;
  } else {
    out << "unknown";
  }
  out << ", " << std::thread::hardware_concurrency() << " hardware threads";
#if defined(__clang__)
  out << ", clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  out << ", gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace lifnet
