#include "lifnet/surrogate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lifnet/errors.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

void SglParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("surrogate alpha must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("learning rate eta must be positive");
  if (!std::isfinite(center)) throw ConfigError("surrogate center must be finite");
}

double surrogate_derivative(double v, const SglParams& params) {
  const double d = v - params.center;
  return params.alpha * std::exp(-params.alpha * d * d);
}

std::array<double, 2> normalized_output(std::span<const double> logits) {
  const double lo = std::min(logits[0], logits[1]);
  const double a = logits[0] - lo;
  const double b = logits[1] - lo;
  const double sum = a + b;
  if (!(sum > 0.0)) return {0.5, 0.5};
  return {a / sum, b / sum};
}

std::array<double, 2> sgl_error(std::span<const double> y, std::span<const double> y_hat,
                                std::span<const double> v_out, const SglParams& params) {
  std::array<double, 2> delta{};
  for (std::size_t k = 0; k < 2; ++k) {
    delta[k] = params.eta * (y[k] - y_hat[k]) * surrogate_derivative(v_out[k], params);
  }
  return delta;
}

LayerUpdates sgl_layer_updates(std::span<const double> h1, std::span<const double> h2,
                               std::span<const double> delta, const WeightMatrix& w_h2_out) {
  if (w_h2_out.rows() != h2.size() || w_h2_out.cols() != delta.size()) {
    throw ConfigError("sgl_layer_updates: W_h2_out is " + std::to_string(w_h2_out.rows()) + "x" +
                      std::to_string(w_h2_out.cols()) + ", expected " + std::to_string(h2.size()) + "x" +
                      std::to_string(delta.size()));
  }
  LayerUpdates out{WeightMatrix(h1.size(), h2.size()), WeightMatrix(h2.size(), delta.size())};
  std::vector<double> back(h2.size(), 0.0);
  for (std::size_t j = 0; j < h2.size(); ++j) {
    for (std::size_t k = 0; k < delta.size(); ++k) {
      out.h2_out(j, k) = h2[j] * delta[k];
      back[j] += w_h2_out(j, k) * delta[k];
    }
  }
  for (std::size_t i = 0; i < h1.size(); ++i) {
    if (h1[i] == 0.0) continue;
    for (std::size_t j = 0; j < h2.size(); ++j) out.h1_h2(i, j) = h1[i] * back[j];
  }
  return out;
}

SampleUpdate sgl_sample_update(const NetworkConfig& config, const NetworkWeights& weights, const SpikeTrain& input,
                               int label, const SglParams& params) {
  const ForwardRecord rec = forward(config, weights, input);
  const auto y_hat = normalized_output(rec.logits);
  const std::array<double, 2> y{label == 0 ? 1.0 : 0.0, label == 1 ? 1.0 : 0.0};
  SampleUpdate out;
  out.predicted = predict(rec);
  if (y_hat == y) {
    out.updates = {WeightMatrix(config.h1, config.h2), WeightMatrix(config.h2, config.n_out)};
    return out;
  }
  const auto delta = sgl_error(y, y_hat, rec.logits, params);
  out.updates = sgl_layer_updates(spike_counts(rec.h1_spikes), spike_counts(rec.h2_spikes), delta, weights.h2_out);
  out.zero = false;
  return out;
}

std::pair<Model, TrainReport> train_sgl(const NetworkConfig& config_in, const EncoderConfig& encoder,
                                        const TrainingData& data, const SglParams& params, std::size_t epochs,
                                        std::uint64_t seed) {
  NetworkConfig config = config_in;
  config.readout = Readout::membrane_logit;
  config.validate();
  encoder.validate();
  params.validate();
  check_training_data(data, config, encoder);

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  Model model{Rule::sgl, config, encoder, init_weights(config, rng), {}, std::nullopt};

  const std::size_t n = data.train.size();
  std::vector<std::size_t> order(n);

  TrainReport report;
  report.rule = Rule::sgl;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t correct = 0;
    for (auto i : order) {
      const auto input = encode(data.train.row(i), encoder, i, epoch);
      const auto step = sgl_sample_update(config, model.weights, input, data.train.labels[i], params);
      if (step.predicted == data.train.labels[i]) ++correct;
      if (step.zero) continue;
      auto w1 = model.weights.h1_h2.values();
      auto w2 = model.weights.h2_out.values();
      const auto d1 = step.updates.h1_h2.values();
      const auto d2 = step.updates.h2_out.values();
      for (std::size_t k = 0; k < w1.size(); ++k) w1[k] += d1[k];
      for (std::size_t k = 0; k < w2.size(); ++k) w2[k] += d2[k];
    }
    report.curve.push_back({epoch + 1, static_cast<double>(correct) / static_cast<double>(n),
                            evaluate_accuracy(model, data.val, val_stream_offset)});
  }
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.epochs_run = epochs;
  report.final_train_accuracy = evaluate_accuracy(model, data.train);
  report.final_val_accuracy = evaluate_accuracy(model, data.val, val_stream_offset);
  return {std::move(model), std::move(report)};
}

}  // namespace lifnet
