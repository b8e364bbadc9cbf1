#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "lifnet/active.hpp"
#include "lifnet/dataset.hpp"
#include "lifnet/surrogate.hpp"
#include "lifnet/tempotron.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

/// Everything needed for one training run. The membrane parameters (tau_m,
/// v_th, bias) are shared by every layer; t_steps drives both the encoder
/// and the network.
struct RunSpec {
  Rule rule = Rule::sgl;

  std::size_t h1 = 96;
  std::size_t h2 = 48;
  double tau_m = 2.0;
  double v_th = 0.3;
  double bias = 0.0;
  std::size_t t_steps = 10;

  EncoderScheme scheme = EncoderScheme::rate;
  double gain = 1.0;
  bool resample_per_epoch = false;

  double sgl_alpha = 0.1;
  double sgl_eta = 0.05;
  std::optional<double> sgl_center;  // unset: v_th

  double tempotron_lambda = 0.01;
  double tau_ratio = 0.25;  // tau_s / tau_m
  double tempotron_threshold = 1.0;

  BalParams bal{1.0, 0.999, 2, 0.5, 0.05, 0.1, 5};

  std::size_t epochs = 30;
  std::uint64_t seed = 42;

  NetworkConfig network(std::size_t d_in) const;
  EncoderConfig encoder() const;
  SglParams sgl() const;
  TempotronParams tempotron() const;

  /// Throws ConfigError on any invalid derived parameter set.
  void validate(std::size_t d_in) const;
};

/// Trains `spec.rule` on prepared data. The model carries no feature stats;
/// callers attach them.
std::pair<Model, TrainReport> run_training(const RunSpec& spec, const TrainingData& data);

/// Dataset used when no CSV is given: the default synthetic spec with `seed`.
Dataset default_dataset(std::uint64_t seed);

}  // namespace lifnet
