// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace lorentz {

/// Running mean and variance (Welford), mergeable in a fixed order.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = double(n + o.n);
    const double d = o.mean - mean;
    mean += d * double(o.n) / total;
    m2 += o.m2 + d * d * double(n) * double(o.n) / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double stderr_mean() const;
};

/// One-sample Kolmogorov-Smirnov statistic sup|F_n - F| (sorts `xs`).
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov critical value at level `alpha` for n samples.
double ks_critical(std::size_t n, double alpha = 0.01);

}  // namespace lorentz
