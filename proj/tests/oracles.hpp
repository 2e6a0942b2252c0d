// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

struct BruteHit {
  long double time;
  std::int64_t cx, cy;
};

// Every lattice center within t_max + 1 of the start, intersected in long double.
inline std::optional<BruteHit> free_path(long double px, long double py, long double vx,
                                         long double vy, long double r, long double t_max) {
  std::optional<BruteHit> best;
  const auto R = std::int64_t(std::ceil(t_max + 1.0L));
  const auto x0 = std::int64_t(std::floor(px)), y0 = std::int64_t(std::floor(py));
  for (std::int64_t cx = x0 - R; cx <= x0 + R + 1; ++cx)
    for (std::int64_t cy = y0 - R; cy <= y0 + R + 1; ++cy) {
      const long double dx = cx - px, dy = cy - py;
      const long double along = dx * vx + dy * vy;
      if (along <= 0) continue;
      const long double perp = dx * vy - dy * vx;
      const long double disc = r * r - perp * perp;
      if (disc <= 0) continue;
      const long double t = along - std::sqrt(disc);
      if (t <= 0 || t > t_max) continue;
      if (!best || t < best->time) best = BruteHit{t, cx, cy};
    }
  return best;
}

// Exact continued fraction of (P + sqrt(D)) / Q for integers with Q | (D - P^2).
struct QuadraticIrrational {
  std::int64_t P, D, Q;

  static std::int64_t isqrt(std::int64_t n) {
    auto s = std::int64_t(std::sqrt(double(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
  }

  long double value() const { return (P + std::sqrt((long double)D)) / Q; }

  // Partial quotients of the fractional part x = value() - floor(value()): a_k = floor(1/T^k x).
  // Also returns T^k x for k < n, each computed fresh from the integer state.
  void expand(int n, std::vector<std::int64_t>& a, std::vector<long double>& orbit) const {
    const std::int64_t s = isqrt(D);
    std::int64_t p = P, q = Q;
    auto floor_of = [&](std::int64_t pp, std::int64_t qq) {
      // floor((pp + sqrt D) / qq) for qq > 0
      return (pp + s) >= 0 ? (pp + s) / qq : -((-(pp + s) + qq - 1) / qq);
    };
    std::int64_t a0 = floor_of(p, q);
    p = p - a0 * q;  // x = (p + sqrt D)/q in (0, 1)
    for (int k = 0; k < n; ++k) {
      orbit.push_back((p + std::sqrt((long double)D)) / q);
      // 1/x = q / (p + sqrt D) = q (sqrt D - p) / (D - p^2) = (-p + sqrt D) / ((D - p^2)/q)
      const std::int64_t q1 = (D - p * p) / q;
      const std::int64_t p1 = -p;
      const std::int64_t ak = floor_of(p1, q1);
      a.push_back(ak);
      p = p1 - ak * q1;
      q = q1;
    }
  }
};

struct Fraction {
  std::int64_t p, q;
};

// All reduced fractions of [0, 1] with denominator <= Q, sorted.
inline std::vector<Fraction> farey_sequence(std::int64_t Q) {
  std::vector<Fraction> f;
  for (std::int64_t q = 1; q <= Q; ++q)
    for (std::int64_t p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) f.push_back({p, q});
  std::sort(f.begin(), f.end(), [](Fraction x, Fraction y) { return x.p * y.q < y.p * x.q; });
  return f;
}

}  // namespace oracle
