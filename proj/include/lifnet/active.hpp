#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lifnet/network.hpp"
#include "lifnet/surrogate.hpp"

namespace lifnet {

struct EncoderConfig;
struct Model;
struct TrainReport;
struct TrainingData;
struct Dataset;

struct BalParams {
  double u_init = 1.0;
  double u_decay = 0.999;
  int bins = 2;
  // Total label budget as a fraction of the initial pool.
  double query_fraction = 0.5;
  double lr = 0.01;
  // Fraction of the training partition labeled before the first query.
  double seed_fraction = 0.1;
  // Rounds (from the first) in which the budget is spent, in equal parts.
  std::size_t acquisition_rounds = 1;

  /// Throws ConfigError on u_init < 0, u_decay outside (0, 1), bins < 2,
  /// query_fraction outside (0, 1], lr <= 0, seed_fraction outside (0, 1),
  /// acquisition_rounds == 0.
  void validate() const;
};

/// Per-weight uncertainty for the two trained matrices.
struct Uncertainty {
  WeightMatrix h1_h2;
  WeightMatrix h2_out;

  static Uncertainty uniform(const NetworkConfig& config, double u);
};

/// Uncertainty-weighted information score of one sample:
///   sum_{i in h2, k in out} U(w_ik) * I(S_out_k ; S_h2_i)
/// with I the plug-in mutual information between the single-neuron spike
/// trains of the sample's forward pass.
double bal_score(const NetworkConfig& config, const NetworkWeights& weights, const Uncertainty& u,
                 const SpikeTrain& input, int bins);

/// Scores of data rows `rows` (the row index is also the encoder stream key).
/// Parallel over samples with OpenMP.
std::vector<double> bal_scores(const Model& model, const Uncertainty& u, const Dataset& data,
                               std::span<const std::size_t> rows, int bins);
/// Reference implementation of bal_scores.
std::vector<double> bal_scores_serial(const Model& model, const Uncertainty& u, const Dataset& data,
                                      std::span<const std::size_t> rows, int bins);

/// Positions into `scores`, highest first; equal scores keep index order.
std::vector<std::size_t> rank_by_score(std::span<const double> scores);

/// Top ceil(query_fraction * |pool|) rows of `pool` by bal_score.
std::vector<std::size_t> bal_select(const Dataset& pool, const Model& model, const Uncertainty& u,
                                    const BalParams& params);

/// Active learning over data.train: a stratified seed set starts labeled, the
/// rest is the pool. Each round may query labels from the pool (see
/// BalParams), then runs one shuffled online pass over all labeled samples
/// with the surrogate-gradient update, each weight's step multiplied by its
/// uncertainty; a weight's uncertainty is multiplied by u_decay whenever it
/// receives a non-zero step. `sgl.eta` is ignored in favour of `bal.lr`.
std::pair<Model, TrainReport> train_bal(const NetworkConfig& config, const EncoderConfig& encoder,
                                        const TrainingData& data, const SglParams& sgl, const BalParams& bal,
                                        std::size_t rounds, std::uint64_t seed);

}  // namespace lifnet
