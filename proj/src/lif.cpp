#include "lifnet/lif.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "lifnet/errors.hpp"

namespace lifnet {

void LifParams::validate() const {
  if (!std::isfinite(tau_m) || !std::isfinite(v_th) || !std::isfinite(v_reset) || !std::isfinite(r_m) ||
      !std::isfinite(bias)) {
    throw ConfigError("LIF parameters must be finite");
  }
  if (tau_m <= 1.0) throw ConfigError("tau_m must exceed 1.0, got " + std::to_string(tau_m));
  if (v_th <= v_reset) throw ConfigError("v_th must exceed v_reset");
  if (bias < 0.0) throw ConfigError("bias must be non-negative");
}

double decay_factor(double tau_m) {
  if (!(tau_m > 1.0)) throw DomainError("decay_factor: tau_m must exceed 1.0, got " + std::to_string(tau_m));
  return std::exp(-1.0 / tau_m);
}

void lif_step(std::span<double> v, std::span<const double> current, const LifParams& params, double decay,
              std::span<std::uint8_t> spikes, std::span<double> pre_reset) {
  assert(current.size() == v.size() && spikes.size() == v.size());
  assert(pre_reset.empty() || pre_reset.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double next = decay * v[i] + params.r_m * current[i] + params.bias;
    if (!pre_reset.empty()) pre_reset[i] = next;
    const bool fired = next >= params.v_th;
    spikes[i] = fired ? 1 : 0;
    v[i] = fired ? params.v_reset : next;
  }
}

}  // namespace lifnet
