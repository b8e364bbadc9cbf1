#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lifnet/spike_train.hpp"

namespace lifnet {

enum class EncoderScheme { poisson, rate };

std::string_view to_string(EncoderScheme s);
EncoderScheme scheme_from_string(std::string_view s);

struct EncoderConfig {
  EncoderScheme scheme = EncoderScheme::rate;
  std::size_t t_steps = 10;
  double gain = 1.0;
  std::uint64_t seed = 0;
  // Poisson only: draw a fresh raster every epoch instead of reusing the
  // per-sample one.
  bool resample_per_epoch = false;

  void validate() const;
};

/// Per-dimension bounds used by normalize_features.
struct FeatureStats {
  std::vector<double> min;
  std::vector<double> max;

  /// Column-wise min/max over the rows of an n x d row-major matrix.
  static FeatureStats from_rows(std::span<const double> features, std::size_t d);
};

/// (x - min) / (max - min) clamped to [0, 1]; constant dimensions map to 0.
std::vector<double> normalize_features(std::span<const double> raw, const FeatureStats& stats);

/// Bernoulli(gain * f_j) per step and channel, drawn timestep-major from a
/// stream seeded with `seed`. Throws ConfigError if any gain * f_j lies
/// outside [0, 1].
SpikeTrain poisson_encode(std::span<const double> features, const EncoderConfig& cfg, std::uint64_t seed);

/// Channel j fires k_j = round(gain * f_j * T) times, evenly spaced: at step t
/// iff floor((t+1) k_j / T) > floor(t k_j / T).
SpikeTrain rate_encode(std::span<const double> features, const EncoderConfig& cfg);

/// Stream seed for one sample. Fixed per sample unless the config asks for
/// per-epoch resampling.
std::uint64_t sample_seed(const EncoderConfig& cfg, std::size_t sample_index, std::size_t epoch);

/// Dispatches on cfg.scheme.
SpikeTrain encode(std::span<const double> features, const EncoderConfig& cfg, std::size_t sample_index,
                  std::size_t epoch = 0);

}  // namespace lifnet
