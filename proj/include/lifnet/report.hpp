#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lifnet/benchmark.hpp"
#include "lifnet/hpo.hpp"
#include "lifnet/training.hpp"

namespace lifnet {

using Json = nlohmann::json;

Json to_json(const TrainReport& report);
Json to_json(const TrialParams& params);
Json to_json(const Trial& trial);
Json to_json(const StudyReport& study);
Json to_json(const BenchmarkReport& report);

/// One row per trial: id, status, seed, every parameter, accuracies, wall time.
void write_study_csv(const StudyReport& study, std::ostream& out);

/// Replaces every wall-time and timestamp field with null, recursively, so
/// reports from repeated runs can be compared byte for byte.
Json mask_volatile(Json j);

/// Models are stored as JSON: configs, fitted feature stats and all weights.
Json model_to_json(const Model& model);
/// Throws InputError on a missing or malformed field.
Model model_from_json(const Json& j);
void save_model(const Model& model, const std::filesystem::path& path);
/// Throws ParseError(missing_file) if the file cannot be opened and
/// InputError if it is not a model.
Model load_model(const std::filesystem::path& path);

/// Writes `j.dump(2)` plus a newline.
void write_json(const Json& j, const std::filesystem::path& path);

}  // namespace lifnet
