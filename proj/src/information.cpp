#include "lifnet/information.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifnet/errors.hpp"

namespace lifnet {

std::vector<int> spike_symbols(const SpikeTrain& train, int bins) {
  if (bins < 2) throw ConfigError("entropy estimation needs at least 2 bins");
  const auto channels = train.channels();
  std::vector<int> symbols(train.t_steps(), 0);
  if (channels == 0) return symbols;
  for (std::size_t t = 0; t < train.t_steps(); ++t) {
    std::size_t c = 0;
    for (auto s : train.step(t)) c += s;
    const auto bucket = c * static_cast<std::size_t>(bins) / channels;
    symbols[t] = static_cast<int>(std::min(bucket, static_cast<std::size_t>(bins - 1)));
  }
  return symbols;
}

namespace {

double plogp_sum(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double entropy_bits(std::span<const int> symbols, int n_symbols) {
  if (symbols.empty()) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_symbols), 0);
  for (int s : symbols) ++counts[static_cast<std::size_t>(s)];
  return plogp_sum(counts, symbols.size());
}

double mutual_information_bits(std::span<const int> pre, std::span<const int> post, int n_symbols) {
  if (pre.size() != post.size()) {
    throw InputError("mutual information needs equal-length trains (" + std::to_string(pre.size()) + " vs " +
                     std::to_string(post.size()) + ")");
  }
  if (pre.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(n_symbols);
  std::vector<std::size_t> joint(k * k, 0), pre_counts(k, 0);
  for (std::size_t t = 0; t < pre.size(); ++t) {
    const auto a = static_cast<std::size_t>(pre[t]);
    const auto b = static_cast<std::size_t>(post[t]);
    ++joint[a * k + b];
    ++pre_counts[a];
  }

  const double h_post = entropy_bits(post, n_symbols);
  const double h_pre = entropy_bits(pre, n_symbols);
  // H(post | pre) = sum_a p(a) H(post | pre = a)
  double h_cond = 0.0;
  const double n = static_cast<double>(pre.size());
  for (std::size_t a = 0; a < k; ++a) {
    if (pre_counts[a] == 0) continue;
    const std::span<const std::size_t> row(joint.data() + a * k, k);
    h_cond += static_cast<double>(pre_counts[a]) / n * plogp_sum(row, pre_counts[a]);
  }
  return std::clamp(h_post - h_cond, 0.0, std::min(h_pre, h_post));
}

double spike_entropy(const SpikeTrain& train, int bins) { return entropy_bits(spike_symbols(train, bins), bins); }

double mutual_information(const SpikeTrain& pre, const SpikeTrain& post, int bins) {
  if (pre.t_steps() != post.t_steps()) {
    throw InputError("mutual information needs equal-length trains (" + std::to_string(pre.t_steps()) + " vs " +
                     std::to_string(post.t_steps()) + " steps)");
  }
  return mutual_information_bits(spike_symbols(pre, bins), spike_symbols(post, bins), bins);
}

}  // namespace lifnet
