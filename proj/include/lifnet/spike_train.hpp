#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lifnet {

/// Binary spike raster, timestep-major: element (t, c) lives at t * channels + c.
class SpikeTrain {
 public:
  static constexpr std::size_t max_steps = 1024;

  SpikeTrain() = default;
  /// Throws ConfigError unless 1 <= t_steps <= max_steps.
  SpikeTrain(std::size_t t_steps, std::size_t channels);

  std::size_t t_steps() const noexcept { return t_steps_; }
  std::size_t channels() const noexcept { return channels_; }

  std::uint8_t at(std::size_t t, std::size_t c) const { return data_[t * channels_ + c]; }
  void set(std::size_t t, std::size_t c, bool spike) { data_[t * channels_ + c] = spike ? 1 : 0; }

  std::span<const std::uint8_t> step(std::size_t t) const {
    return {data_.data() + t * channels_, channels_};
  }
  std::span<std::uint8_t> step(std::size_t t) { return {data_.data() + t * channels_, channels_}; }

  std::span<const std::uint8_t> raw() const noexcept { return data_; }

  std::size_t channel_count(std::size_t c) const;
  std::size_t total() const;

  /// Single-channel raster holding channel `c`.
  SpikeTrain channel(std::size_t c) const;

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  std::size_t t_steps_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace lifnet
