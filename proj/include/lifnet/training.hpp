#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lifnet/dataset.hpp"
#include "lifnet/encoding.hpp"
#include "lifnet/network.hpp"
#include "lifnet/tempotron.hpp"

namespace lifnet {

enum class Rule { sgl, tempotron, bal };

std::string_view to_string(Rule r);
Rule rule_from_string(std::string_view s);

/// Training and validation partitions with features already normalized to
/// [0, 1].
struct TrainingData {
  Dataset train;
  Dataset val;
};

/// Stratified split followed by min/max normalization fitted on the training
/// partition. The fitted stats are returned so a saved model can normalize
/// unseen data identically.
struct PreparedData {
  TrainingData data;
  FeatureStats stats;
};
PreparedData prepare_data(const Dataset& raw, double train_fraction, std::uint64_t split_seed);

/// Normalizes every row of `raw` with `stats`.
Dataset normalize_dataset(const Dataset& raw, const FeatureStats& stats);

/// Encoding-stream keys keep training and validation rasters independent.
inline constexpr std::uint64_t val_stream_offset = std::uint64_t{1} << 40;

struct EpochStats {
  std::size_t epoch = 0;
  double train_accuracy = 0.0;  // online: prediction made before each update
  double val_accuracy = 0.0;
};

struct TrainReport {
  Rule rule = Rule::sgl;
  std::size_t epochs_run = 0;
  double final_train_accuracy = 0.0;
  double final_val_accuracy = 0.0;
  double wall_time_seconds = 0.0;
  std::vector<EpochStats> curve;
  std::optional<std::size_t> labels_queried;  // BAL only
  std::optional<std::size_t> pool_size;       // BAL only
};

/// A trained classifier. For the tempotron rule `weights.h2_out` holds the
/// two output tempotron units (one column per class) and classification goes
/// through their peak potentials instead of the network's own readout.
struct Model {
  Rule rule = Rule::sgl;
  NetworkConfig network;
  EncoderConfig encoder;
  NetworkWeights weights;
  TempotronParams tempotron;
  std::optional<FeatureStats> stats;
};

/// Class for one normalized feature row. `stream_index` keys the encoder.
int classify(const Model& model, std::span<const double> features, std::uint64_t stream_index);

/// Fraction of rows classified correctly. Samples are scored in parallel with
/// OpenMP; the count is an integer reduction, so the result is identical to
/// evaluate_accuracy_serial for any thread count.
double evaluate_accuracy(const Model& model, const Dataset& data, std::uint64_t stream_offset = 0);

/// Reference implementation of evaluate_accuracy, one sample at a time.
double evaluate_accuracy_serial(const Model& model, const Dataset& data, std::uint64_t stream_offset = 0);

/// Throws InputError unless both partitions are usable for training.
void check_training_data(const TrainingData& data, const NetworkConfig& config, const EncoderConfig& encoder);

}  // namespace lifnet
