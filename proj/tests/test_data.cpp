#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lifnet/dataset.hpp"
#include "lifnet/errors.hpp"
#include "oracles.hpp"

using namespace lifnet;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

ParseError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(ParseError::Kind::missing_file, 0, "");
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("synthetic defaults") {
    SyntheticSpec spec;
    const auto d = generate_synthetic(spec);
    CHECK(d.size() == 800);
    CHECK(d.d == 16);
    CHECK(d.count(1) == 400);
    CHECK(d.provenance == Provenance::synthetic);
    CHECK_NOTHROW(d.validate());
    for (double x : d.features) CHECK((x >= 0.0 && x <= 1.0));
    CHECK(d == generate_synthetic(spec));
    spec.seed = 1;
    CHECK_FALSE(d == generate_synthetic(spec));
  }

  TEST_CASE("synthetic balance rounding") {
    SyntheticSpec spec;
    spec.n = 11;
    spec.class_balance = 0.3;
    CHECK(generate_synthetic(spec).count(1) == 3);
    spec.class_balance = 1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.class_balance = 0.5;
    spec.std0 = 0.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }

  TEST_CASE("default means are 6 std apart") {
    SyntheticSpec spec;
    const auto [m0, m1] = spec.resolved_means();
    double dist2 = 0.0;
    for (std::size_t j = 0; j < spec.d; ++j) dist2 += (m1[j] - m0[j]) * (m1[j] - m0[j]);
    CHECK(std::sqrt(dist2) == doctest::Approx(6.0 * spec.std0));
  }

  TEST_CASE("synthetic class means") {
    SyntheticSpec spec;
    spec.n = 4000;
    spec.seed = 17;
    const auto d = generate_synthetic(spec);
    const auto [m0, m1] = spec.resolved_means();
    for (int label : {0, 1}) {
      const auto& m = label == 1 ? m1 : m0;
      const double nc = static_cast<double>(d.count(label));
      for (std::size_t j = 0; j < d.d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
          if (d.labels[i] == label) sum += d.row(i)[j];
        CHECK(std::abs(sum / nc - m[j]) <= 4.0 * spec.std0 / std::sqrt(nc));
      }
    }
  }

  TEST_CASE("logistic oracle on equal and separated means") {
    SyntheticSpec spec;
    spec.seed = 3;
    auto sep = generate_synthetic(spec);
    auto split = stratified_split(sep, 0.8, 3);
    CHECK(oracle::logistic_accuracy(split.train, split.val) >= 0.99);

    spec.mean0 = std::vector<double>(spec.d, 0.5);
    spec.mean1 = spec.mean0;
    spec.n = 4000;
    auto same = generate_synthetic(spec);
    split = stratified_split(same, 0.8, 3);
    CHECK(std::abs(oracle::logistic_accuracy(split.train, split.val) - 0.5) <= 0.05);
  }

  TEST_CASE("csv round trip") {
    SyntheticSpec spec;
    spec.n = 37;
    spec.d = 5;
    auto d = generate_synthetic(spec);
    std::ostringstream out;
    write_csv(d, out);
    auto back = parse(out.str());
    back.provenance = Provenance::synthetic;
    CHECK(back == d);
  }

  TEST_CASE("csv file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "lifnet_roundtrip.csv";
    SyntheticSpec spec;
    spec.n = 10;
    spec.d = 2;
    const auto d = generate_synthetic(spec);
    write_csv(d, path);
    const auto back = load_csv(path);
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    CHECK(back.provenance == Provenance::csv);
    std::filesystem::remove(path);
  }

  TEST_CASE("csv parsing details") {
    const auto d = parse("\xEF\xBB\xBF" "a, b ,label\r\n1,2,0\r\n\r\n+3.5,-4e-1,1\n");
    CHECK(d.size() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(d.features == std::vector<double>{1, 2, 3.5, -0.4});
    CHECK(d.labels == std::vector<int>{0, 1});
  }

  TEST_CASE("csv errors carry kind and row") {
    auto e = parse_error("a,label\n1,0\n2,2\n");
    CHECK(e.kind() == ParseError::Kind::bad_label);
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);

    e = parse_error("a,b,label\n1,2,0\n1,1\n");
    CHECK(e.kind() == ParseError::Kind::column_count);
    CHECK(e.row() == 3);

    e = parse_error("a,label\nx,1\n");
    CHECK(e.kind() == ParseError::Kind::malformed_row);
    CHECK(e.row() == 2);

    e = parse_error("a,label\nnan,1\n");
    CHECK(e.kind() == ParseError::Kind::malformed_row);

    e = parse_error("a,b\n1,0\n");
    CHECK(e.kind() == ParseError::Kind::bad_header);

    e = parse_error("");
    CHECK(e.kind() == ParseError::Kind::bad_header);

    try {
      load_csv("/nonexistent/lifnet.csv");
      FAIL("expected a ParseError");
    } catch (const ParseError& err) {
      CHECK(err.kind() == ParseError::Kind::missing_file);
    }
  }

  TEST_CASE("stratified split arithmetic") {
    Dataset d;
    d.d = 1;
    for (int i = 0; i < 100; ++i) {
      d.features.push_back(i);
      d.labels.push_back(i % 2);
    }
    const auto s = stratified_split(d, 0.8, 1);
    CHECK(s.train.count(0) == 40);
    CHECK(s.train.count(1) == 40);
    CHECK(s.val.count(0) == 10);
    CHECK(s.val.count(1) == 10);
    const auto again = stratified_split(d, 0.8, 1);
    CHECK(again.train_indices == s.train_indices);
    CHECK(again.val_indices == s.val_indices);
  }

  TEST_CASE("stratified split partitions random datasets") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      Dataset d;
      d.d = 1;
      const std::size_t n = 4 + rng() % 200;
      for (std::size_t i = 0; i < n; ++i) {
        d.features.push_back(static_cast<double>(i));
        d.labels.push_back(i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2));
      }
      if (d.count(0) < 2 || d.count(1) < 2) continue;
      const double frac = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
      const auto s = stratified_split(d, frac, rng());
      std::set<std::size_t> train(s.train_indices.begin(), s.train_indices.end());
      std::set<std::size_t> val(s.val_indices.begin(), s.val_indices.end());
      CHECK(train.size() == s.train_indices.size());
      CHECK(val.size() == s.val_indices.size());
      std::vector<std::size_t> both;
      std::set_intersection(train.begin(), train.end(), val.begin(), val.end(), std::back_inserter(both));
      CHECK(both.empty());
      CHECK(train.size() + val.size() == n);
      for (int label : {0, 1}) {
        const double nc = static_cast<double>(d.count(label));
        CHECK(std::abs(static_cast<double>(s.train.count(label)) - frac * nc) <= 1.0);
      }
    }
  }

  TEST_CASE("split rejects tiny classes") {
    Dataset d;
    d.d = 1;
    d.features = {0, 1, 2};
    d.labels = {0, 0, 1};
    CHECK_THROWS_AS(stratified_split(d, 0.5, 0), InputError);
    d.labels = {0, 1, 1};
    CHECK_THROWS_AS(stratified_split(d, 1.0, 0), InputError);
  }

  TEST_CASE("dataset validation") {
    Dataset d;
    d.d = 2;
    d.features = {0, 1, 2, 3};
    d.labels = {0, 0};
    CHECK_THROWS_AS(d.validate(), InputError);
    CHECK_NOTHROW(d.validate(false));
    d.labels = {0, 2};
    CHECK_THROWS_AS(d.validate(false), InputError);
    d.labels = {0, 1};
    d.features[1] = std::nan("");
    CHECK_THROWS_AS(d.validate(), InputError);
  }
}
