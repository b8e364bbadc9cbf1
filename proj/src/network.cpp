#include "lifnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifnet/errors.hpp"
#include "lifnet/rng.hpp"

namespace lifnet {

std::vector<double> WeightMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool WeightMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double w) { return std::isfinite(w); });
}

std::string_view to_string(Readout r) {
  return r == Readout::spike_count ? "spike-count" : "membrane-logit";
}

Readout readout_from_string(std::string_view s) {
  if (s == "spike-count") return Readout::spike_count;
  if (s == "membrane-logit") return Readout::membrane_logit;
  throw ConfigError("unknown readout mode '" + std::string(s) + "'");
}

void NetworkConfig::validate() const {
  if (d_in == 0 || h1 == 0 || h2 == 0) throw ConfigError("layer sizes must be positive");
  if (n_out != 2) throw ConfigError("output layer must have exactly 2 units");
  if (t_steps < 1 || t_steps > SpikeTrain::max_steps) throw ConfigError("t_steps out of range");
  lif_h1.validate();
  lif_h2.validate();
  lif_out.validate();
}

namespace {

void check_matrix(const WeightMatrix& w, std::size_t rows, std::size_t cols, const char* name) {
  if (w.rows() != rows || w.cols() != cols) {
    throw ConfigError(std::string("weight matrix ") + name + " is " + std::to_string(w.rows()) + "x" +
                      std::to_string(w.cols()) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

void fill_uniform(WeightMatrix& w, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(w.rows()));
  for (double& x : w.values()) x = bound * (2.0 * uniform01(rng) - 1.0);
}

// current[j] = sum over spiking presynaptic i of w(i, j), accumulated in
// ascending i.
void synaptic_current(std::span<const std::uint8_t> pre, const WeightMatrix& w, std::span<double> current) {
  std::fill(current.begin(), current.end(), 0.0);
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (!pre[i]) continue;
    const auto row = w.row(i);
    for (std::size_t j = 0; j < current.size(); ++j) current[j] += row[j];
  }
}

}  // namespace

void NetworkWeights::check_shapes(const NetworkConfig& config) const {
  check_matrix(in_h1, config.d_in, config.h1, "in_h1");
  check_matrix(h1_h2, config.h1, config.h2, "h1_h2");
  check_matrix(h2_out, config.h2, config.n_out, "h2_out");
}

bool NetworkWeights::all_finite() const {
  return in_h1.all_finite() && h1_h2.all_finite() && h2_out.all_finite();
}

NetworkWeights init_weights(const NetworkConfig& config, std::mt19937_64& rng) {
  NetworkWeights w{WeightMatrix(config.d_in, config.h1), WeightMatrix(config.h1, config.h2),
                   WeightMatrix(config.h2, config.n_out)};
  fill_uniform(w.in_h1, rng);
  fill_uniform(w.h1_h2, rng);
  fill_uniform(w.h2_out, rng);
  return w;
}

ForwardRecord forward(const NetworkConfig& config, const NetworkWeights& weights, const SpikeTrain& input) {
  if (input.channels() != config.d_in) {
    throw ConfigError("input has " + std::to_string(input.channels()) + " channels, network expects " +
                      std::to_string(config.d_in));
  }
  if (input.t_steps() != config.t_steps) {
    throw ConfigError("input has " + std::to_string(input.t_steps()) + " steps, network expects " +
                      std::to_string(config.t_steps));
  }
  weights.check_shapes(config);

  const std::size_t T = config.t_steps;
  const std::size_t n_out = config.n_out;
  const double decay1 = decay_factor(config.lif_h1.tau_m);
  const double decay2 = decay_factor(config.lif_h2.tau_m);
  const double decay_out = decay_factor(config.lif_out.tau_m);

  ForwardRecord rec{SpikeTrain(T, config.h1),
                    SpikeTrain(T, config.h2),
                    SpikeTrain(T, n_out),
                    std::vector<double>(T * config.h1),
                    std::vector<double>(T * config.h2),
                    std::vector<double>(T * n_out),
                    std::vector<double>(n_out, 0.0)};

  std::vector<double> v1(config.h1, 0.0), v2(config.h2, 0.0), v_out(n_out, 0.0), v_shadow(n_out, 0.0);
  std::vector<double> i1(config.h1), i2(config.h2), i_out(n_out);

  for (std::size_t t = 0; t < T; ++t) {
    synaptic_current(input.step(t), weights.in_h1, i1);
    lif_step(v1, i1, config.lif_h1, decay1, rec.h1_spikes.step(t),
             std::span<double>(rec.h1_trace).subspan(t * config.h1, config.h1));

    synaptic_current(rec.h1_spikes.step(t), weights.h1_h2, i2);
    lif_step(v2, i2, config.lif_h2, decay2, rec.h2_spikes.step(t),
             std::span<double>(rec.h2_trace).subspan(t * config.h2, config.h2));

    synaptic_current(rec.h2_spikes.step(t), weights.h2_out, i_out);
    auto out_trace = std::span<double>(rec.out_trace).subspan(t * n_out, n_out);
    if (config.readout == Readout::spike_count) {
      lif_step(v_out, i_out, config.lif_out, decay_out, rec.out_spikes.step(t), out_trace);
    } else {
      for (std::size_t k = 0; k < n_out; ++k) {
        v_out[k] = decay_out * v_out[k] + config.lif_out.r_m * i_out[k] + config.lif_out.bias;
        out_trace[k] = v_out[k];
      }
      lif_step(v_shadow, i_out, config.lif_out, decay_out, rec.out_spikes.step(t));
    }
  }

  if (config.readout == Readout::spike_count) {
    for (std::size_t k = 0; k < n_out; ++k) rec.logits[k] = static_cast<double>(rec.out_spikes.channel_count(k));
  } else {
    rec.logits = v_out;
  }
  return rec;
}

int predict(std::span<const double> logits) {
  int best = 0;
  for (std::size_t k = 1; k < logits.size(); ++k) {
    if (logits[k] > logits[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

std::vector<double> spike_counts(const SpikeTrain& train) {
  std::vector<double> counts(train.channels(), 0.0);
  for (std::size_t t = 0; t < train.t_steps(); ++t) {
    const auto s = train.step(t);
    for (std::size_t c = 0; c < s.size(); ++c) counts[c] += s[c];
  }
  return counts;
}

}  // namespace lifnet
