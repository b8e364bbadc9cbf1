#pragma once

#include <cstdint>
#include <span>

namespace lifnet {

/// Leaky integrate-and-fire parameters for one layer. Time is measured in
/// simulation steps (dt = 1).
struct LifParams {
  double tau_m = 2.0;
  double v_th = 0.5;
  double v_reset = 0.0;
  double r_m = 1.0;
  double bias = 0.0;

  /// Throws ConfigError on tau_m <= 1, v_th <= v_reset, bias < 0 or
  /// non-finite fields.
  void validate() const;

  friend bool operator==(const LifParams&, const LifParams&) = default;
};

/// exp(-1 / tau_m). Throws DomainError if tau_m <= 1.
double decay_factor(double tau_m);

/// One exponential-Euler step for a layer:
///   v' = decay * v + r_m * current + bias
/// A neuron spikes iff v' >= v_th and is then hard-reset to v_reset.
///
/// `v` is updated in place and holds the post-reset state on return.
/// `pre_reset`, when non-empty, receives v' (the potential before reset).
/// `decay` must equal decay_factor(params.tau_m); it is passed in so the
/// exponential is evaluated once per layer, not once per step.
void lif_step(std::span<double> v, std::span<const double> current, const LifParams& params, double decay,
              std::span<std::uint8_t> spikes, std::span<double> pre_reset = {});

}  // namespace lifnet
