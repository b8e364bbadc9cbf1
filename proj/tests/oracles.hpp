// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lifnet/dataset.hpp"

namespace oracle {

// Full-batch gradient-descent logistic regression fitted on `train`, scored
// on `test`.
inline double logistic_accuracy(const lifnet::Dataset& train, const lifnet::Dataset& test, int iterations = 2000,
                                double lr = 0.5) {
  const std::size_t d = train.d;
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  const auto n = static_cast<double>(train.size());
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> gw(d, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto x = train.row(i);
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
      const double err = 1.0 / (1.0 + std::exp(-z)) - train.labels[i];
      for (std::size_t j = 0; j < d; ++j) gw[j] += err * x[j];
      gb += err;
    }
    for (std::size_t j = 0; j < d; ++j) w[j] -= lr * gw[j] / n;
    b -= lr * gb / n;
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto x = test.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
    if ((z > 0.0 ? 1 : 0) == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

// Plug-in entropy in bits from raw counts.
inline double entropy_from_counts(const std::vector<double>& counts) {
  double n = 0.0;
  for (double c : counts) n += c;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log2(c / n);
  }
  return h;
}

// I(X;Y) = H(X) + H(Y) - H(X,Y) over symbols in [0, k).
inline double mutual_information(const std::vector<int>& x, const std::vector<int>& y, int k) {
  std::vector<double> px(k, 0.0), py(k, 0.0), pxy(static_cast<std::size_t>(k * k), 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    px[x[t]] += 1;
    py[y[t]] += 1;
    pxy[static_cast<std::size_t>(x[t] * k + y[t])] += 1;
  }
  return entropy_from_counts(px) + entropy_from_counts(py) - entropy_from_counts(pxy);
}

}  // namespace oracle
