#include "lifnet/tempotron.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lifnet/errors.hpp"
#include "lifnet/rng.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

void TempotronParams::validate() const {
  if (!(tau_s > 0.0) || !(tau_m > tau_s)) throw ConfigError("tempotron needs tau_m > tau_s > 0");
  if (!(lambda_lr > 0.0) || !std::isfinite(lambda_lr)) throw ConfigError("tempotron lambda must be positive");
  if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ConfigError("tempotron threshold must be positive");
  if (t_window < 1 || t_window > SpikeTrain::max_steps) throw ConfigError("tempotron t_window out of range");
}

TempotronParams TempotronParams::with_ratio(double tau_m, double ratio, double lambda_lr, std::size_t t_window,
                                            double threshold) {
  return TempotronParams{tau_m, ratio * tau_m, lambda_lr, t_window, threshold};
}

namespace {

void check_taus(double tau_m, double tau_s) {
  if (!(tau_s > 0.0) || !(tau_m > tau_s)) {
    throw DomainError("psp kernel needs tau_m > tau_s > 0 (got tau_m=" + std::to_string(tau_m) +
                      ", tau_s=" + std::to_string(tau_s) + ")");
  }
}

double raw_kernel(double dt, double tau_m, double tau_s) { return std::exp(-dt / tau_m) - std::exp(-dt / tau_s); }

}  // namespace

double psp_peak_time(double tau_m, double tau_s) {
  check_taus(tau_m, tau_s);
  return tau_m * tau_s / (tau_m - tau_s) * std::log(tau_m / tau_s);
}

double psp_kernel(double dt, double tau_m, double tau_s) {
  check_taus(tau_m, tau_s);
  if (dt < 0.0) return 0.0;
  const double v0 = 1.0 / raw_kernel(psp_peak_time(tau_m, tau_s), tau_m, tau_s);
  return v0 * raw_kernel(dt, tau_m, tau_s);
}

SpikeTimes spike_times(const SpikeTrain& train) {
  SpikeTimes times(train.channels());
  for (std::size_t t = 0; t < train.t_steps(); ++t) {
    const auto s = train.step(t);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i]) times[i].push_back(static_cast<double>(t));
    }
  }
  return times;
}

double tempotron_potential(std::span<const double> weights, const SpikeTimes& times, const TempotronParams& params,
                           double t) {
  double v = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double psp = 0.0;
    for (double ti : times[i]) {
      if (ti <= t) psp += psp_kernel(t - ti, params.tau_m, params.tau_s);
    }
    v += weights[i] * psp;
  }
  return v;
}

PeakPotential tempotron_t_max(std::span<const double> weights, const SpikeTimes& times,
                              const TempotronParams& params) {
  PeakPotential best{0, tempotron_potential(weights, times, params, 0.0)};
  for (std::size_t t = 1; t <= params.t_window; ++t) {
    const double v = tempotron_potential(weights, times, params, static_cast<double>(t));
    if (v > best.v_max) best = {t, v};
  }
  return best;
}

std::vector<double> tempotron_update(std::span<const double> weights, const SpikeTimes& times, bool target_fire,
                                     bool fired, const TempotronParams& params) {
  std::vector<double> delta(times.size(), 0.0);
  if (fired == target_fire) return delta;
  const double t_max = static_cast<double>(tempotron_t_max(weights, times, params).t_max);
  const double sign = target_fire ? 1.0 : -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sum = 0.0;
    for (double ti : times[i]) {
      if (ti < t_max) sum += psp_kernel(t_max - ti, params.tau_m, params.tau_s);
    }
    delta[i] = sign * params.lambda_lr * sum;
  }
  return delta;
}

PspTable::PspTable(const TempotronParams& params) : kernel_(params.t_window + 1) {
  for (std::size_t dt = 0; dt <= params.t_window; ++dt) {
    kernel_[dt] = psp_kernel(static_cast<double>(dt), params.tau_m, params.tau_s);
  }
}

std::vector<double> PspTable::traces(const SpikeTrain& train) const {
  const std::size_t n_t = kernel_.size();
  const std::size_t channels = train.channels();
  std::vector<double> out(n_t * channels, 0.0);
  const std::size_t last = std::min(train.t_steps(), n_t);
  for (std::size_t ts = 0; ts < last; ++ts) {
    const auto s = train.step(ts);
    for (std::size_t i = 0; i < channels; ++i) {
      if (!s[i]) continue;
      // K(0) is exactly zero, so starting at ts + 1 changes nothing.
      for (std::size_t t = ts + 1; t < n_t; ++t) out[t * channels + i] += kernel_[t - ts];
    }
  }
  return out;
}

PeakPotential peak_from_traces(std::span<const double> traces, std::size_t channels,
                               std::span<const double> weights) {
  const std::size_t n_t = traces.size() / channels;
  PeakPotential best{};
  for (std::size_t t = 0; t < n_t; ++t) {
    const auto row = traces.subspan(t * channels, channels);
    const double v = std::inner_product(row.begin(), row.end(), weights.begin(), 0.0);
    if (t == 0 || v > best.v_max) best = {t, v};
  }
  return best;
}

int tempotron_classify(const SpikeTrain& h2_spikes, const WeightMatrix& units, const TempotronParams& params) {
  const PspTable table(params);
  const auto tr = table.traces(h2_spikes);
  const auto w0 = units.column(0);
  const auto w1 = units.column(1);
  const double p0 = peak_from_traces(tr, units.rows(), w0).v_max;
  const double p1 = peak_from_traces(tr, units.rows(), w1).v_max;
  return p1 > p0 ? 1 : 0;
}

std::pair<Model, TrainReport> train_tempotron(const NetworkConfig& config, const EncoderConfig& encoder,
                                              const TrainingData& data, const TempotronParams& params,
                                              std::size_t epochs, std::uint64_t seed) {
  config.validate();
  encoder.validate();
  params.validate();
  check_training_data(data, config, encoder);
  if (params.t_window != config.t_steps) throw ConfigError("tempotron t_window must equal the network t_steps");

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  Model model{Rule::tempotron, config, encoder, init_weights(config, rng), params, std::nullopt};
  // Both units start from the same random vector: a flat zero potential has
  // t_max = 0 where every trace vanishes, so zero weights never move.
  std::vector<double> start_weights(config.h2);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.h2));
  for (double& w : start_weights) w = bound * (2.0 * uniform01(rng) - 1.0);

  const PspTable table(params);
  const std::size_t h2 = config.h2;
  const std::size_t n = data.train.size();
  const bool fixed_inputs = encoder.scheme == EncoderScheme::rate || !encoder.resample_per_epoch;

  auto traces_for = [&](std::size_t i, std::size_t epoch) {
    const auto input = encode(data.train.row(i), encoder, i, epoch);
    return table.traces(forward(config, model.weights, input).h2_spikes);
  };
  std::vector<std::vector<double>> cache;
  if (fixed_inputs) {
    cache.resize(n);
    for (std::size_t i = 0; i < n; ++i) cache[i] = traces_for(i, 0);
  }

  std::array<std::vector<double>, 2> units{start_weights, start_weights};
  std::vector<std::size_t> order(n);

  TrainReport report;
  report.rule = Rule::tempotron;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t correct = 0;
    for (auto i : order) {
      std::vector<double> fresh;
      if (!fixed_inputs) fresh = traces_for(i, epoch);
      const std::vector<double>& tr = fixed_inputs ? cache[i] : fresh;

      std::array<PeakPotential, 2> peaks{peak_from_traces(tr, h2, units[0]), peak_from_traces(tr, h2, units[1])};
      const int predicted = peaks[1].v_max > peaks[0].v_max ? 1 : 0;
      if (predicted == data.train.labels[i]) ++correct;

      for (int c = 0; c < 2; ++c) {
        const bool target = data.train.labels[i] == c;
        const bool fired = peaks[c].v_max >= params.threshold;
        if (fired == target) continue;
        // Trace at t_max sums K(t_max - t_i) over t_i <= t_max; the t_i = t_max
        // term is K(0) = 0, matching the strict t_i < t_max of the rule.
        const double step = (target ? 1.0 : -1.0) * params.lambda_lr;
        const auto row = std::span<const double>(tr).subspan(peaks[c].t_max * h2, h2);
        for (std::size_t k = 0; k < h2; ++k) units[c][k] += step * row[k];
      }
    }
    for (std::size_t k = 0; k < h2; ++k) {
      model.weights.h2_out(k, 0) = units[0][k];
      model.weights.h2_out(k, 1) = units[1][k];
    }
    report.curve.push_back({epoch + 1, static_cast<double>(correct) / static_cast<double>(n),
                            evaluate_accuracy(model, data.val, val_stream_offset)});
  }
  for (std::size_t k = 0; k < h2; ++k) {
    model.weights.h2_out(k, 0) = units[0][k];
    model.weights.h2_out(k, 1) = units[1][k];
  }
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.epochs_run = epochs;
  report.final_train_accuracy = evaluate_accuracy(model, data.train);
  report.final_val_accuracy = evaluate_accuracy(model, data.val, val_stream_offset);
  return {std::move(model), std::move(report)};
}

}  // namespace lifnet
