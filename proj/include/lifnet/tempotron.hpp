#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lifnet/network.hpp"
#include "lifnet/spike_train.hpp"

namespace lifnet {

struct EncoderConfig;
struct Model;
struct TrainReport;
struct TrainingData;

struct TempotronParams {
  double tau_m = 2.0;
  double tau_s = 0.5;
  double lambda_lr = 0.01;
  std::size_t t_window = 10;
  // Firing threshold of an output tempotron unit.
  double threshold = 1.0;

  /// Throws ConfigError unless tau_m > tau_s > 0, lambda_lr > 0, threshold > 0.
  void validate() const;

  /// tau_s = ratio * tau_m.
  static TempotronParams with_ratio(double tau_m, double ratio, double lambda_lr, std::size_t t_window,
                                    double threshold = 1.0);
};

/// Time of the kernel maximum, tau_m tau_s / (tau_m - tau_s) * ln(tau_m / tau_s).
double psp_peak_time(double tau_m, double tau_s);

/// Normalized difference-of-exponentials kernel, unit peak; 0 for dt < 0.
/// Throws DomainError unless tau_m > tau_s > 0.
double psp_kernel(double dt, double tau_m, double tau_s);

/// Spike times (in steps) per channel.
using SpikeTimes = std::vector<std::vector<double>>;
SpikeTimes spike_times(const SpikeTrain& train);

/// v(t) = sum_i w_i sum_{t_i <= t} K(t - t_i), resting potential 0.
double tempotron_potential(std::span<const double> weights, const SpikeTimes& times, const TempotronParams& params,
                           double t);

struct PeakPotential {
  std::size_t t_max = 0;
  double v_max = 0.0;
};

/// Argmax of v over the grid {0, 1, ..., t_window}, earliest on ties. With no
/// input spikes the potential is flat zero and t_max = 0.
PeakPotential tempotron_t_max(std::span<const double> weights, const SpikeTimes& times,
                              const TempotronParams& params);

/// Error-driven update. Zero when `fired == target_fire`; otherwise
/// +/- lambda sum_{t_i < t_max} K(t_max - t_i) per channel (plus for a missed
/// firing, minus for a false one).
std::vector<double> tempotron_update(std::span<const double> weights, const SpikeTimes& times, bool target_fire,
                                     bool fired, const TempotronParams& params);

/// Kernel sampled on the integer grid plus per-channel cumulative PSP traces.
/// Fast path used by training; agrees with tempotron_potential on the grid.
class PspTable {
 public:
  explicit PspTable(const TempotronParams& params);

  double kernel(std::size_t dt) const { return dt < kernel_.size() ? kernel_[dt] : 0.0; }

  /// (t_window + 1) x channels matrix, entry (t, i) = sum_{t_i <= t} K(t - t_i).
  std::vector<double> traces(const SpikeTrain& train) const;
  std::size_t t_window() const noexcept { return kernel_.size() - 1; }

 private:
  std::vector<double> kernel_;
};

/// Peak of one unit from precomputed traces.
PeakPotential peak_from_traces(std::span<const double> traces, std::size_t channels,
                               std::span<const double> weights);

/// Hidden layers are initialized randomly and frozen; their second-layer
/// spike trains drive one output tempotron per class (one-vs-rest, both
/// units starting from the same random weight vector). Prediction picks the
/// unit with the higher peak potential, ties to class 0. Throws InputError on empty training data.
std::pair<Model, TrainReport> train_tempotron(const NetworkConfig& config, const EncoderConfig& encoder,
                                              const TrainingData& data, const TempotronParams& params,
                                              std::size_t epochs, std::uint64_t seed);

/// Class from second-hidden-layer spikes and the output tempotron weights
/// (h2 x 2, one column per class).
int tempotron_classify(const SpikeTrain& h2_spikes, const WeightMatrix& units, const TempotronParams& params);

}  // namespace lifnet
