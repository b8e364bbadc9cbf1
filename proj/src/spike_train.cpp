#include "lifnet/spike_train.hpp"

#include <numeric>
#include <string>

#include "lifnet/errors.hpp"

namespace lifnet {

SpikeTrain::SpikeTrain(std::size_t t_steps, std::size_t channels)
    : t_steps_(t_steps), channels_(channels), data_(t_steps * channels, 0) {
  if (t_steps < 1 || t_steps > max_steps) {
    throw ConfigError("spike train length must be in [1, " + std::to_string(max_steps) + "], got " +
                      std::to_string(t_steps));
  }
}

std::size_t SpikeTrain::channel_count(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t t = 0; t < t_steps_; ++t) n += at(t, c);
  return n;
}

std::size_t SpikeTrain::total() const {
  return std::accumulate(data_.begin(), data_.end(), std::size_t{0});
}

SpikeTrain SpikeTrain::channel(std::size_t c) const {
  SpikeTrain out(t_steps_, 1);
  for (std::size_t t = 0; t < t_steps_; ++t) out.set(t, 0, at(t, c) != 0);
  return out;
}

}  // namespace lifnet
