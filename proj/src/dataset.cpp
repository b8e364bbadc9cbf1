#include "lifnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "lifnet/errors.hpp"

namespace lifnet {

std::size_t Dataset::count(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.d = d;
  out.feature_names = feature_names;
  out.provenance = provenance;
  out.features.reserve(indices.size() * d);
  out.labels.reserve(indices.size());
  for (auto i : indices) {
    const auto r = row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
  }
  return out;
}

void Dataset::validate(bool require_both_classes) const {
  if (features.size() != labels.size() * d) throw InputError("feature matrix does not match label count");
  if (!feature_names.empty() && feature_names.size() != d) throw InputError("feature name count != d");
  if (!std::all_of(features.begin(), features.end(), [](double x) { return std::isfinite(x); })) {
    throw InputError("feature matrix contains NaN or Inf");
  }
  if (!std::all_of(labels.begin(), labels.end(), [](int y) { return y == 0 || y == 1; })) {
    throw InputError("labels must be 0 or 1");
  }
  if (require_both_classes) {
    if (size() < 2) throw InputError("dataset needs at least 2 samples");
    if (count(0) == 0 || count(1) == 0) throw InputError("dataset needs both classes");
  }
}

void SyntheticSpec::validate() const {
  if (d < 1) throw ConfigError("synthetic d must be >= 1");
  if (n < 2) throw ConfigError("synthetic n must be >= 2");
  if (!(class_balance > 0.0 && class_balance < 1.0)) throw ConfigError("class_balance must be in (0, 1)");
  if (!(std0 > 0.0) || !(std1 > 0.0)) throw ConfigError("class std must be positive");
  if ((!mean0.empty() && mean0.size() != d) || (!mean1.empty() && mean1.size() != d)) {
    throw ConfigError("class mean dimension != d");
  }
}

std::pair<std::vector<double>, std::vector<double>> SyntheticSpec::resolved_means() const {
  const double offset = 0.5 * separation * std0 / std::sqrt(static_cast<double>(d));
  std::vector<double> m0(d), m1(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    m0[j] = 0.5 - sign * offset;
    m1[j] = 0.5 + sign * offset;
  }
  return {mean0.empty() ? std::move(m0) : mean0, mean1.empty() ? std::move(m1) : mean1};
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto [m0, m1] = spec.resolved_means();
  const auto n1 = static_cast<std::size_t>(std::llround(static_cast<double>(spec.n) * spec.class_balance));

  std::mt19937_64 rng(spec.seed);
  std::vector<int> labels(spec.n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n1), 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  Dataset out;
  out.d = spec.d;
  out.provenance = Provenance::synthetic;
  out.labels = labels;
  out.features.resize(spec.n * spec.d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto& mean = labels[i] == 1 ? m1 : m0;
    const double sd = labels[i] == 1 ? spec.std1 : spec.std0;
    for (std::size_t j = 0; j < spec.d; ++j) {
      out.features[i * spec.d + j] = std::clamp(mean[j] + sd * normal(rng), 0.0, 1.0);
    }
  }
  for (std::size_t j = 0; j < spec.d; ++j) out.feature_names.push_back("f" + std::to_string(j));
  return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_double(const std::string& text, double& out) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(ParseError::Kind::bad_header, 1, "row 1: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = split_fields(line);
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header.back() != "label") {
    throw ParseError(ParseError::Kind::bad_header, 1,
                     "row 1: header must list at least one feature column and end with 'label'");
  }

  Dataset out;
  out.d = header.size() - 1;
  out.feature_names.assign(header.begin(), header.end() - 1);
  out.provenance = Provenance::csv;

  while (next_line()) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(ParseError::Kind::column_count, row,
                       "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                           " columns, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < out.d; ++j) {
      double x = 0.0;
      if (!parse_double(fields[j], x)) {
        throw ParseError(ParseError::Kind::malformed_row, row,
                         "row " + std::to_string(row) + ": column '" + header[j] + "' is not a finite number: '" +
                             fields[j] + "'");
      }
      out.features.push_back(x);
    }
    const std::string label = trim(fields.back());
    if (label != "0" && label != "1") {
      throw ParseError(ParseError::Kind::bad_label, row,
                       "row " + std::to_string(row) + ": label must be 0 or 1, found '" + label + "'");
    }
    out.labels.push_back(label == "1" ? 1 : 0);
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::missing_file, 0, "cannot open '" + path.string() + "'");
  return parse_csv(in);
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < data.d; ++j) {
    out << (data.feature_names.empty() ? "f" + std::to_string(j) : data.feature_names[j]) << ',';
  }
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double x : data.row(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << data.labels[i] << '\n';
  }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(data, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InputError("train_fraction must be in (0, 1)");
  data.validate(false);
  std::mt19937_64 rng(seed);
  Split split;
  for (int label : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels[i] == label) idx.push_back(i);
    }
    if (idx.size() < 2) {
      throw InputError("class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                       " samples; at least 2 are needed to split");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    split.train_indices.insert(split.train_indices.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val_indices.insert(split.val_indices.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  split.train = data.subset(split.train_indices);
  split.val = data.subset(split.val_indices);
  return split;
}

}  // namespace lifnet
