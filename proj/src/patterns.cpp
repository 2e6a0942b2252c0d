// SPDX-License-Identifier: Apache-2.0
#include "lorentz/patterns.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include "lorentz/error.hpp"

namespace lorentz {

double pattern_eps(double alpha, double r) { return 2.0 * r * std::hypot(1.0, alpha); }

CollisionPattern collision_pattern_eps(const CfExpansion& cf, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "eps must be positive");
  if (eps >= 1.0) {
    std::ostringstream os;
    os << "eps = " << eps << " >= 1";
    throw Error(ErrorCode::EpsTooLarge, os.str());
  }
  std::size_t N = 1;
  while (N < cf.d.size() && cf.d[N] > eps) ++N;
  if (N >= cf.d.size())
    throw Error(ErrorCode::PrecisionExhausted, "expansion does not reach d_n <= eps");
  if (cf.d[N] <= 0.0)
    throw Error(ErrorCode::DomainError, "slope is rational at this scale (d_N = 0)");

  CollisionPattern pt;
  pt.alpha = cf.alpha;
  pt.eps = eps;
  pt.N = std::int64_t(N);
  const double dN = cf.d[N], dN1 = cf.d[N - 1];
  pt.k = -std::int64_t(std::floor((eps - dN1) / dN));
  pt.A = 1.0 - dN / eps;
  pt.B = 1.0 - dN1 / eps + double(pt.k) * dN / eps;
  pt.Q = eps * double(cf.q[N]);
  pt.Sigma = (N % 2 == 0) ? 1 : -1;
  pt.Q_prime = (1.0 - pt.Q * (1.0 - pt.B)) / (1.0 - pt.A);
  return pt;
}

CollisionPattern collision_pattern(double alpha, double r) {
  check_radius(r);
  const double eps = pattern_eps(alpha, r);
  if (eps >= 1.0) {
    std::ostringstream os;
    os << "eps = 2r sqrt(1+alpha^2) = " << eps << " >= 1";
    throw Error(ErrorCode::EpsTooLarge, os.str());
  }
  return collision_pattern_eps(cf_expand(alpha, std::max(eps, 1e-14)), eps);
}

CollisionPattern pattern_from_abq(double A, double B, double Q, int Sigma) {
  CollisionPattern pt;
  pt.A = A;
  pt.B = B;
  pt.Q = Q;
  pt.Sigma = Sigma;
  pt.Q_prime = (1.0 - Q * (1.0 - B)) / (1.0 - A);
  pt.eps = std::nan("");
  pt.alpha = std::nan("");
  return pt;
}

TransferOutcome transfer_explicit(const CollisionPattern& pt, double h_prime) {
  if (!(std::abs(h_prime) <= 1.0 + 1e-12))
    throw Error(ErrorCode::DomainError, "impact parameter must lie in [-1, 1]");
  const double x = pt.Sigma * h_prime;
  const double upper = 1.0 - 2.0 * pt.A;
  const double lower = -1.0 + 2.0 * pt.B;
  if (x > upper) return {pt.Q, h_prime - 2.0 * pt.Sigma * (1.0 - pt.A), 1};
  if (x < lower) return {pt.Q_prime, h_prime + 2.0 * pt.Sigma * (1.0 - pt.B), 2};
  if (x >= lower - 1e-12 && x <= upper + 1e-12)
    return {pt.Q + pt.Q_prime, h_prime + 2.0 * pt.Sigma * (pt.A - pt.B), 3};
  throw Error(ErrorCode::BranchGap, "no transfer branch applies; pattern is inconsistent");
}

TransferOutcome transfer_exact(double alpha, double r, double h_prime) {
  check_radius(r);
  if (!(std::abs(h_prime) < 1.0))
    throw Error(ErrorCode::DomainError, "impact parameter must lie in (-1, 1)");
  const Vec2 w(1.0, alpha);
  const Vec2 v = w.normalized();
  const Vec2 u = std::sqrt(1.0 - h_prime * h_prime) * v + h_prime * perp(v);
  const PathResult res = trace_line(r * u, w, r, 1e3 / r);
  if (std::holds_alternative<Capped>(res))
    throw Error(ErrorCode::NoCollision, "no obstacle within 1e3/r");
  const auto& hit = std::get<ObstacleHit>(res);
  return {2.0 * r * hit.time, hit.impact, 0};
}

Vec2 OctantMap::apply(const Vec2& v) const {
  Vec2 out(sx * v.x(), sy * v.y());
  if (swap) std::swap(out.x(), out.y());
  return out;
}

OctantMap octant_reduce(const Vec2& dir) {
  OctantMap m;
  m.sx = dir.x() < 0 ? -1 : 1;
  m.sy = dir.y() < 0 ? -1 : 1;
  const Vec2 a(std::abs(dir.x()), std::abs(dir.y()));
  m.swap = a.y() > a.x();
  m.alpha = m.swap ? a.x() / a.y() : a.y() / a.x();
  return m;
}

TransferOutcome transfer_exact_dir(const Vec2& dir, double r, double h_prime) {
  const OctantMap m = octant_reduce(dir);
  const int o = m.orientation();
  TransferOutcome t = transfer_exact(m.alpha, r, o * h_prime);
  t.h *= o;
  return t;
}

TransferOutcome transfer_trace_dir(const Vec2& dir, double r, double h_prime) {
  const Vec2 v = dir.normalized();
  const Vec2 u = std::sqrt(1.0 - h_prime * h_prime) * v + h_prime * perp(v);
  const PathResult res = free_path(r * u, v, r, 1e3 / r);
  if (std::holds_alternative<Capped>(res))
    throw Error(ErrorCode::NoCollision, "no obstacle within 1e3/r");
  const auto& hit = std::get<ObstacleHit>(res);
  return {2.0 * r * hit.time, hit.impact, 0};
}

std::vector<Channel> channel_set(double r) {
  check_radius(r);
  const double bound = 1.0 / (4.0 * r * r);
  const auto qmax = std::int64_t(std::ceil(std::sqrt(bound)));
  std::vector<Channel> out;
  for (std::int64_t p = 0; p <= qmax; ++p)
    for (std::int64_t q = 0; q <= qmax; ++q) {
      if (std::gcd(p, q) != 1) continue;
      const double n2 = double(p * p + q * q);
      if (n2 >= bound) continue;
      out.push_back({p, q, 1.0 / std::sqrt(n2) - 2.0 * r});
    }
  return out;
}

double channel_lower_bound(double r, double t) {
  if (!(t > 1.0)) throw Error(ErrorCode::DomainError, "channel_lower_bound needs t > 1");
  double sum = 0.0;
  for (const Channel& c : channel_set(r)) {
    const double norm = std::hypot(double(c.p), double(c.q));
    const double term = (2.0 / 3.0) * norm * c.width * std::asin(r * c.width / (3.0 * t));
    // images of (p, q) under sign changes: 4 for interior directions, 2 on the axes
    sum += (c.p > 0 && c.q > 0 ? 4.0 : 2.0) * term;
  }
  return sum / (2.0 * std::numbers::pi * (1.0 - std::numbers::pi * r * r));
}

}  // namespace lorentz
