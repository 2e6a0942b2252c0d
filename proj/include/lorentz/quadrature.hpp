// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace lorentz::quad {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // the relative floor stops refinement once rounding dominates the estimate
  const double floor = 1e-14 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, floor)) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive Simpson over consecutive pieces [x_i, x_{i+1}] of an increasing breakpoint list.
template <class F>
double adaptive_simpson_pieces(const F& f, std::span<const double> breaks, double tol = 1e-10) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    sum += adaptive_simpson(f, breaks[i], breaks[i + 1], tol / double(breaks.size()));
  return sum;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Fixed-order Gauss-Legendre rule on [a, b].
class GaussRule {
 public:
  explicit GaussRule(int n) {
    auto [x, w] = gauss_legendre(n);
    x_ = std::move(x);
    w_ = std::move(w);
  }

  template <class F>
  double operator()(const F& f, double a, double b) const {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) s += w_[i] * f(c + h * x_[i]);
    return h * s;
  }

  /// Composite rule over the pieces of a sorted breakpoint list.
  template <class F>
  double pieces(const F& f, std::span<const double> breaks) const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (breaks[i + 1] > breaks[i]) s += (*this)(f, breaks[i], breaks[i + 1]);
    return s;
  }

  std::size_t order() const { return x_.size(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<double> x_, w_;
};

}  // namespace lorentz::quad
