#include "lifnet/training.hpp"

#include <string>

#include "lifnet/errors.hpp"

namespace lifnet {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::sgl: return "sgl";
    case Rule::tempotron: return "tempotron";
    case Rule::bal: return "bal";
  }
  return "?";
}

Rule rule_from_string(std::string_view s) {
  if (s == "sgl") return Rule::sgl;
  if (s == "tempotron") return Rule::tempotron;
  if (s == "bal") return Rule::bal;
  throw ConfigError("unknown rule '" + std::string(s) + "' (expected sgl, tempotron or bal)");
}

Dataset normalize_dataset(const Dataset& raw, const FeatureStats& stats) {
  Dataset out = raw;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto norm = normalize_features(raw.row(i), stats);
    std::copy(norm.begin(), norm.end(), out.features.begin() + static_cast<std::ptrdiff_t>(i * raw.d));
  }
  return out;
}

PreparedData prepare_data(const Dataset& raw, double train_fraction, std::uint64_t split_seed) {
  raw.validate(true);
  auto split = stratified_split(raw, train_fraction, split_seed);
  auto stats = FeatureStats::from_rows(split.train.features, raw.d);
  return {{normalize_dataset(split.train, stats), normalize_dataset(split.val, stats)}, std::move(stats)};
}

void check_training_data(const TrainingData& data, const NetworkConfig& config, const EncoderConfig& encoder) {
  if (data.train.size() == 0) throw InputError("training set is empty");
  data.train.validate(false);
  data.val.validate(false);
  if (data.train.d != config.d_in || (data.val.size() > 0 && data.val.d != config.d_in)) {
    throw ConfigError("dataset has " + std::to_string(data.train.d) + " features, network expects " +
                      std::to_string(config.d_in));
  }
  if (encoder.t_steps != config.t_steps) throw ConfigError("encoder and network disagree on t_steps");
}

int classify(const Model& model, std::span<const double> features, std::uint64_t stream_index) {
  const auto input = encode(features, model.encoder, stream_index, 0);
  const auto rec = forward(model.network, model.weights, input);
  if (model.rule == Rule::tempotron) return tempotron_classify(rec.h2_spikes, model.weights.h2_out, model.tempotron);
  return predict(rec);
}

double evaluate_accuracy(const Model& model, const Dataset& data, std::uint64_t stream_offset) {
  if (data.size() == 0) return 0.0;
  const auto n = static_cast<long long>(data.size());
  long long correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(static)
  for (long long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (classify(model, data.row(idx), stream_offset + idx) == data.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

double evaluate_accuracy_serial(const Model& model, const Dataset& data, std::uint64_t stream_offset) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (classify(model, data.row(i), stream_offset + i) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace lifnet
