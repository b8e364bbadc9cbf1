#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "lifnet/network.hpp"

namespace lifnet {

struct EncoderConfig;
struct Model;
struct TrainReport;
struct TrainingData;

struct SglParams {
  double alpha = 0.1;   // surrogate sharpness
  double eta = 0.05;    // learning rate
  double center = 0.3;  // potential at which the surrogate peaks; usually v_th

  void validate() const;
};

/// alpha * exp(-alpha (v - center)^2)
double surrogate_derivative(double v, const SglParams& params);

/// Output distribution for the error term: logits shifted so the minimum is
/// zero, then scaled to sum to one. All-equal logits give (0.5, 0.5).
std::array<double, 2> normalized_output(std::span<const double> logits);

/// delta_k = eta (y_k - y_hat_k) sigma'(v_out_k)
std::array<double, 2> sgl_error(std::span<const double> y, std::span<const double> y_hat,
                                std::span<const double> v_out, const SglParams& params);

struct LayerUpdates {
  WeightMatrix h1_h2;   // h1 x h2
  WeightMatrix h2_out;  // h2 x 2
};

/// dW_h2_out = h2^T delta and dW_h1_h2 = h1^T (W_h2_out delta), with h1 and h2
/// the per-neuron spike counts of one sample. Throws ConfigError if
/// w_h2_out is not |h2| x |delta|.
LayerUpdates sgl_layer_updates(std::span<const double> h1, std::span<const double> h2,
                               std::span<const double> delta, const WeightMatrix& w_h2_out);

/// Full per-sample step: forward with membrane-logit readout, error, updates.
/// The updates are returned rather than applied; both are zero when the
/// normalized output already equals the one-hot target.
struct SampleUpdate {
  LayerUpdates updates;
  int predicted = 0;
  bool zero = true;
};
SampleUpdate sgl_sample_update(const NetworkConfig& config, const NetworkWeights& weights, const SpikeTrain& input,
                               int label, const SglParams& params);

/// Online training of the h1->h2 and h2->out weights; the input->h1 weights
/// stay at their random initialization. The network is forced into
/// membrane-logit readout. Throws InputError on empty training data.
std::pair<Model, TrainReport> train_sgl(const NetworkConfig& config, const EncoderConfig& encoder,
                                        const TrainingData& data, const SglParams& params, std::size_t epochs,
                                        std::uint64_t seed);

}  // namespace lifnet
