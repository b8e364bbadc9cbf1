#include "lifnet/active.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "lifnet/errors.hpp"
#include "lifnet/information.hpp"
#include "lifnet/rng.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

void BalParams::validate() const {
  if (!(u_init >= 0.0) || !std::isfinite(u_init)) throw ConfigError("BAL u_init must be non-negative");
  if (!(u_decay > 0.0 && u_decay < 1.0)) throw ConfigError("BAL u_decay must be in (0, 1)");
  if (bins < 2) throw ConfigError("BAL bins must be >= 2");
  if (!(query_fraction > 0.0 && query_fraction <= 1.0)) throw ConfigError("BAL query_fraction must be in (0, 1]");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("BAL lr must be positive");
  if (!(seed_fraction > 0.0 && seed_fraction < 1.0)) throw ConfigError("BAL seed_fraction must be in (0, 1)");
  if (acquisition_rounds == 0) throw ConfigError("BAL acquisition_rounds must be >= 1");
}

Uncertainty Uncertainty::uniform(const NetworkConfig& config, double u) {
  return {WeightMatrix(config.h1, config.h2, u), WeightMatrix(config.h2, config.n_out, u)};
}

double bal_score(const NetworkConfig& config, const NetworkWeights& weights, const Uncertainty& u,
                 const SpikeTrain& input, int bins) {
  const auto rec = forward(config, weights, input);
  std::vector<std::vector<int>> post(config.n_out);
  for (std::size_t k = 0; k < config.n_out; ++k) post[k] = spike_symbols(rec.out_spikes.channel(k), bins);

  double score = 0.0;
  for (std::size_t i = 0; i < config.h2; ++i) {
    if (rec.h2_spikes.channel_count(i) == 0) continue;  // constant train: I = 0
    const auto pre = spike_symbols(rec.h2_spikes.channel(i), bins);
    for (std::size_t k = 0; k < config.n_out; ++k) {
      score += u.h2_out(i, k) * mutual_information_bits(pre, post[k], bins);
    }
  }
  return score;
}

std::vector<double> bal_scores(const Model& model, const Uncertainty& u, const Dataset& data,
                               std::span<const std::size_t> rows, int bins) {
  std::vector<double> scores(rows.size(), 0.0);
  const auto n = static_cast<long long>(rows.size());
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < n; ++p) {
    const auto r = rows[static_cast<std::size_t>(p)];
    const auto input = encode(data.row(r), model.encoder, r, 0);
    scores[static_cast<std::size_t>(p)] = bal_score(model.network, model.weights, u, input, bins);
  }
  return scores;
}

std::vector<double> bal_scores_serial(const Model& model, const Uncertainty& u, const Dataset& data,
                                      std::span<const std::size_t> rows, int bins) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (auto r : rows) {
    const auto input = encode(data.row(r), model.encoder, r, 0);
    scores.push_back(bal_score(model.network, model.weights, u, input, bins));
  }
  return scores;
}

std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::vector<std::size_t> bal_select(const Dataset& pool, const Model& model, const Uncertainty& u,
                                    const BalParams& params) {
  if (pool.size() == 0) throw InputError("bal_select: pool is empty");
  std::vector<std::size_t> rows(pool.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto scores = bal_scores(model, u, pool, rows, params.bins);
  auto ranked = rank_by_score(scores);
  const auto take = static_cast<std::size_t>(std::ceil(params.query_fraction * static_cast<double>(pool.size())));
  ranked.resize(std::min(take, ranked.size()));
  return ranked;
}

namespace {

// Stratified seed set drawn from its own stream so the training stream sees
// the same draws as a plain surrogate-gradient run.
std::vector<std::size_t> pick_seed_set(const Dataset& train, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, {0xBA15EEDULL}));
  std::vector<std::size_t> picked;
  for (int label : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train.labels[i] == label) idx.push_back(i);
    }
    if (idx.empty()) continue;
    std::shuffle(idx.begin(), idx.end(), rng);
    auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    k = std::clamp<std::size_t>(k, 1, idx.size());
    picked.insert(picked.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

void apply_gated(std::span<double> w, std::span<double> u, std::span<const double> delta, double decay) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (delta[k] == 0.0) continue;
    w[k] += u[k] * delta[k];
    u[k] *= decay;
  }
}

}  // namespace

std::pair<Model, TrainReport> train_bal(const NetworkConfig& config_in, const EncoderConfig& encoder,
                                        const TrainingData& data, const SglParams& sgl_in, const BalParams& bal,
                                        std::size_t rounds, std::uint64_t seed) {
  NetworkConfig config = config_in;
  config.readout = Readout::membrane_logit;
  config.validate();
  encoder.validate();
  bal.validate();
  SglParams sgl = sgl_in;
  sgl.eta = bal.lr;
  sgl.validate();
  check_training_data(data, config, encoder);

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  Model model{Rule::bal, config, encoder, init_weights(config, rng), {}, std::nullopt};
  Uncertainty u = Uncertainty::uniform(config, bal.u_init);

  const auto& train = data.train;
  std::vector<std::size_t> labeled = pick_seed_set(train, bal.seed_fraction, seed);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!std::binary_search(labeled.begin(), labeled.end(), i)) pool.push_back(i);
  }

  TrainReport report;
  report.rule = Rule::bal;
  report.pool_size = pool.size();
  const auto budget = static_cast<std::size_t>(std::ceil(bal.query_fraction * static_cast<double>(pool.size())));
  const std::size_t per_round = (budget + bal.acquisition_rounds - 1) / bal.acquisition_rounds;
  std::size_t queried = 0;

  std::vector<std::size_t> order;
  for (std::size_t round = 0; round < rounds; ++round) {
    if (round < bal.acquisition_rounds && queried < budget && !pool.empty()) {
      const auto scores = bal_scores(model, u, train, pool, bal.bins);
      const auto ranked = rank_by_score(scores);
      const std::size_t take = std::min({per_round, budget - queried, pool.size()});
      std::vector<bool> chosen(pool.size(), false);
      for (std::size_t q = 0; q < take; ++q) {
        chosen[ranked[q]] = true;
        labeled.push_back(pool[ranked[q]]);
      }
      std::vector<std::size_t> rest;
      for (std::size_t p = 0; p < pool.size(); ++p) {
        if (!chosen[p]) rest.push_back(pool[p]);
      }
      pool = std::move(rest);
      queried += take;
      std::sort(labeled.begin(), labeled.end());
    }

    order = labeled;
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t correct = 0;
    for (auto i : order) {
      const auto input = encode(train.row(i), encoder, i, round);
      const auto step = sgl_sample_update(config, model.weights, input, train.labels[i], sgl);
      if (step.predicted == train.labels[i]) ++correct;
      if (step.zero) continue;
      apply_gated(model.weights.h1_h2.values(), u.h1_h2.values(), step.updates.h1_h2.values(), bal.u_decay);
      apply_gated(model.weights.h2_out.values(), u.h2_out.values(), step.updates.h2_out.values(), bal.u_decay);
    }
    report.curve.push_back({round + 1, order.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(order.size()),
                            evaluate_accuracy(model, data.val, val_stream_offset)});
  }
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.epochs_run = rounds;
  report.labels_queried = queried;
  report.final_train_accuracy = evaluate_accuracy(model, data.train);
  report.final_val_accuracy = evaluate_accuracy(model, data.val, val_stream_offset);
  return {std::move(model), std::move(report)};
}

}  // namespace lifnet
