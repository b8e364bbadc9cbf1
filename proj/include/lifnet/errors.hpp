#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lifnet {

// Invalid parameter combinations, shape mismatches, out-of-range settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are structurally valid but unusable (empty dataset, a class too
// small to split, trains of different lengths).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical function called outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised while reading a dataset file. `row` is the 1-based line number in the
// file (the header is row 1), or 0 when the failure is not tied to a row.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { missing_file, malformed_row, bad_label, column_count, bad_header };

  ParseError(Kind kind, std::size_t row, const std::string& what)
      : std::runtime_error(what), kind_(kind), row_(row) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }

 private:
  Kind kind_;
  std::size_t row_;
};

// Every trial of a hyperparameter study failed.
class StudyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lifnet
