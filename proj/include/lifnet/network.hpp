#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lifnet/lif.hpp"
#include "lifnet/spike_train.hpp"

namespace lifnet {

/// Dense row-major weights: rows are presynaptic channels, cols postsynaptic
/// neurons.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::vector<double> column(std::size_t c) const;

  bool all_finite() const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

enum class Readout {
  spike_count,     // LIF output units, logits are spike counts
  membrane_logit,  // non-spiking integrators, logits are final potentials
};

std::string_view to_string(Readout r);
Readout readout_from_string(std::string_view s);

struct NetworkConfig {
  std::size_t d_in = 16;
  std::size_t h1 = 96;
  std::size_t h2 = 48;
  std::size_t n_out = 2;
  LifParams lif_h1{};
  LifParams lif_h2{};
  LifParams lif_out{};
  std::size_t t_steps = 10;
  Readout readout = Readout::membrane_logit;

  /// Throws ConfigError on zero sizes, n_out != 2, bad LIF params or t_steps
  /// outside [1, SpikeTrain::max_steps].
  void validate() const;
};

struct NetworkWeights {
  WeightMatrix in_h1;   // d_in x h1
  WeightMatrix h1_h2;   // h1 x h2
  WeightMatrix h2_out;  // h2 x n_out

  /// Throws ConfigError unless shapes chain d_in -> h1 -> h2 -> n_out.
  void check_shapes(const NetworkConfig& config) const;
  bool all_finite() const;

  friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per matrix, drawn in row-major
/// order in_h1, h1_h2, h2_out.
NetworkWeights init_weights(const NetworkConfig& config, std::mt19937_64& rng);

/// Everything a forward pass produced. Membrane traces hold the potential
/// after integration and before reset, T x N row-major.
struct ForwardRecord {
  SpikeTrain h1_spikes;
  SpikeTrain h2_spikes;
  SpikeTrain out_spikes;
  std::vector<double> h1_trace;
  std::vector<double> h2_trace;
  std::vector<double> out_trace;
  std::vector<double> logits;

  friend bool operator==(const ForwardRecord&, const ForwardRecord&) = default;
};

/// Runs the two hidden LIF layers and the output layer for config.t_steps.
///
/// In membrane-logit mode each output unit is a leaky membrane with
/// `lif_out`'s decay, resistance and bias that never fires or resets; the
/// logits are its potentials after the last step. `out_spikes` then records a
/// shadow LIF unit with `lif_out` driven by the same current, so output
/// activity is still available as a spike train.
///
/// Throws ConfigError on shape mismatches.
ForwardRecord forward(const NetworkConfig& config, const NetworkWeights& weights, const SpikeTrain& input);

/// Argmax of the logits, ties toward class 0.
int predict(std::span<const double> logits);
inline int predict(const ForwardRecord& record) { return predict(record.logits); }

/// Sum of spikes over time per channel.
std::vector<double> spike_counts(const SpikeTrain& train);

}  // namespace lifnet
