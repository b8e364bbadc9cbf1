#include "lifnet/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifnet/errors.hpp"
#include "lifnet/rng.hpp"

namespace lifnet {

std::string_view to_string(EncoderScheme s) { return s == EncoderScheme::poisson ? "poisson" : "rate"; }

EncoderScheme scheme_from_string(std::string_view s) {
  if (s == "poisson") return EncoderScheme::poisson;
  if (s == "rate") return EncoderScheme::rate;
  throw ConfigError("unknown encoder scheme '" + std::string(s) + "'");
}

void EncoderConfig::validate() const {
  if (t_steps < 1 || t_steps > SpikeTrain::max_steps) throw ConfigError("encoder t_steps out of range");
  if (!std::isfinite(gain) || gain < 0.0 || gain > 1.0) {
    throw ConfigError("encoder gain must be in [0, 1] so gain * feature is a probability");
  }
}

FeatureStats FeatureStats::from_rows(std::span<const double> features, std::size_t d) {
  FeatureStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  if (d == 0 || features.empty()) return s;
  std::copy_n(features.begin(), d, s.min.begin());
  std::copy_n(features.begin(), d, s.max.begin());
  for (std::size_t off = d; off < features.size(); off += d) {
    for (std::size_t j = 0; j < d; ++j) {
      s.min[j] = std::min(s.min[j], features[off + j]);
      s.max[j] = std::max(s.max[j], features[off + j]);
    }
  }
  return s;
}

std::vector<double> normalize_features(std::span<const double> raw, const FeatureStats& stats) {
  if (stats.min.size() != raw.size() || stats.max.size() != raw.size()) {
    throw ConfigError("feature stats dimension does not match the feature vector");
  }
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double span = stats.max[j] - stats.min[j];
    out[j] = span > 0.0 ? std::clamp((raw[j] - stats.min[j]) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

namespace {

double firing_probability(double feature, double gain) {
  const double p = gain * feature;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("gain * feature = " + std::to_string(p) + " is not a probability");
  }
  return p;
}

}  // namespace

SpikeTrain poisson_encode(std::span<const double> features, const EncoderConfig& cfg, std::uint64_t seed) {
  if (cfg.scheme != EncoderScheme::poisson) throw ConfigError("poisson_encode needs a poisson encoder config");
  std::vector<double> p(features.size());
  for (std::size_t j = 0; j < features.size(); ++j) p[j] = firing_probability(features[j], cfg.gain);

  SpikeTrain train(cfg.t_steps, features.size());
  SplitMix64 gen(seed);
  for (std::size_t t = 0; t < cfg.t_steps; ++t) {
    for (std::size_t j = 0; j < p.size(); ++j) train.set(t, j, uniform01(gen) < p[j]);
  }
  return train;
}

SpikeTrain rate_encode(std::span<const double> features, const EncoderConfig& cfg) {
  if (cfg.scheme != EncoderScheme::rate) throw ConfigError("rate_encode needs a rate encoder config");
  const std::size_t T = cfg.t_steps;
  SpikeTrain train(T, features.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    const double p = firing_probability(features[j], cfg.gain);
    const auto k = static_cast<std::size_t>(std::llround(p * static_cast<double>(T)));
    for (std::size_t t = 0; t < T; ++t) train.set(t, j, (t + 1) * k / T > t * k / T);
  }
  return train;
}

std::uint64_t sample_seed(const EncoderConfig& cfg, std::size_t sample_index, std::size_t epoch) {
  if (cfg.resample_per_epoch) return derive_seed(cfg.seed, {sample_index, epoch});
  return derive_seed(cfg.seed, {sample_index});
}

SpikeTrain encode(std::span<const double> features, const EncoderConfig& cfg, std::size_t sample_index,
                  std::size_t epoch) {
  if (cfg.scheme == EncoderScheme::rate) return rate_encode(features, cfg);
  return poisson_encode(features, cfg, sample_seed(cfg, sample_index, epoch));
}

}  // namespace lifnet
