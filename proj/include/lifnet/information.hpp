#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lifnet/spike_train.hpp"

namespace lifnet {

/// Per-step symbol of a raster: the population spike count c in [0, channels]
/// bucketed into `bins` equal-width buckets, min(bins - 1, floor(c * bins / channels)).
/// Throws ConfigError if bins < 2.
std::vector<int> spike_symbols(const SpikeTrain& train, int bins);

/// Plug-in Shannon entropy (bits) of a symbol sequence.
double entropy_bits(std::span<const int> symbols, int n_symbols);

/// Plug-in mutual information (bits) between paired symbol sequences,
/// computed as H(post) - H(post | pre) from the joint histogram and clamped to
/// [0, min(H(pre), H(post))] against rounding. Throws InputError on length
/// mismatch.
double mutual_information_bits(std::span<const int> pre, std::span<const int> post, int n_symbols);

double spike_entropy(const SpikeTrain& train, int bins);

/// Throws InputError if the trains differ in length.
double mutual_information(const SpikeTrain& pre, const SpikeTrain& post, int bins);

}  // namespace lifnet
