#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lifnet/encoding.hpp"
#include "lifnet/experiment.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

template <typename T>
struct Interval {
  T lo;
  T hi;
  bool contains(T x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Inclusive bounds for every tunable dimension. Rule-specific dimensions are
/// drawn for every trial so that a trial's parameters do not depend on the
/// rule being studied.
struct SearchSpace {
  Interval<double> tau_m{1.1, 3.0};
  Interval<double> v_th{0.2, 0.8};
  Interval<double> bias{0.0, 0.05};
  Interval<int> h1{64, 128};
  Interval<int> h2{32, 64};
  Interval<int> t_steps{5, 20};
  std::vector<EncoderScheme> schemes{EncoderScheme::poisson, EncoderScheme::rate};
  Interval<double> gain{0.5, 1.0};

  Interval<double> sgl_alpha{0.02, 0.3};
  Interval<double> sgl_eta{0.01, 0.1};
  Interval<double> tempotron_lambda{0.002, 0.05};
  Interval<double> tempotron_threshold{0.5, 2.0};
  Interval<double> bal_lr{0.01, 0.1};
  Interval<double> bal_u_decay{0.99, 0.9999};

  /// Throws ConfigError on lo > hi, non-finite bounds or an empty scheme list.
  void validate() const;
};

struct TrialParams {
  double tau_m = 2.0;
  double v_th = 0.3;
  double bias = 0.0;
  int h1 = 96;
  int h2 = 48;
  int t_steps = 10;
  EncoderScheme scheme = EncoderScheme::rate;
  double gain = 1.0;
  double sgl_alpha = 0.1;
  double sgl_eta = 0.05;
  double tempotron_lambda = 0.01;
  double tempotron_threshold = 1.0;
  double bal_lr = 0.05;
  double bal_u_decay = 0.999;

  bool inside(const SearchSpace& space) const;

  /// `base` with the sampled dimensions overwritten.
  RunSpec apply(RunSpec base) const;

  friend bool operator==(const TrialParams&, const TrialParams&) = default;
};

/// Source of trial parameters. Implementations must be deterministic in
/// (space, trial_index, base_seed) and must not keep mutable state, so
/// trials can be sampled in any order and on any thread.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual TrialParams sample(const SearchSpace& space, std::size_t trial_index, std::uint64_t base_seed) const = 0;
};

/// Independent uniform draw per dimension from a counter-based stream keyed
/// by (base_seed, trial_index). Integers are inclusive-uniform, categories
/// equiprobable.
class RandomSampler final : public Sampler {
 public:
  TrialParams sample(const SearchSpace& space, std::size_t trial_index, std::uint64_t base_seed) const override;
};

TrialParams sample_trial(const SearchSpace& space, std::size_t trial_index, std::uint64_t base_seed);

enum class TrialStatus { complete, failed };

struct Trial {
  std::size_t id = 0;
  TrialParams params;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::failed;
  std::optional<TrainReport> report;  // set iff complete
  std::string error;                   // set iff failed
};

struct StudyReport {
  Rule rule = Rule::sgl;
  std::uint64_t base_seed = 0;
  std::vector<Trial> trials;  // ordered by id
  std::size_t best_trial_id = 0;
  double total_wall_time_seconds = 0.0;

  const Trial& best() const { return trials.at(best_trial_id); }
};

/// Trains one configuration. Any exception marks the trial failed.
using Objective = std::function<TrainReport(const TrialParams&, std::uint64_t seed)>;

/// Seed handed to the objective for trial `trial_index`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial_index);

/// Runs `n_trials` trials on up to `parallelism` OpenMP threads. The report
/// does not depend on `parallelism` apart from wall-time fields. The best
/// trial has the highest validation accuracy among complete trials, lowest
/// id on ties. Throws ConfigError if n_trials == 0 or parallelism == 0 and
/// StudyError if every trial failed.
StudyReport run_study(const SearchSpace& space, const Objective& objective, std::size_t n_trials,
                      std::size_t parallelism, std::uint64_t base_seed, Rule rule = Rule::sgl,
                      const Sampler& sampler = RandomSampler{});

/// Objective that trains `base` (with the trial's parameters and seed) on `data`.
Objective training_objective(const RunSpec& base, const TrainingData& data);

}  // namespace lifnet
