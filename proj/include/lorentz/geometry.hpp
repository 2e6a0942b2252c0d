// SPDX-License-Identifier: Apache-2.0
//
// Event-driven billiard dynamics in the periodic table
//   Z_r = { x in R^2 : dist(x, Z^2) > r }.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <variant>

#include "lorentz/error.hpp"

namespace lorentz {

using Vec2 = Eigen::Vector2d;
using Lattice2 = Eigen::Matrix<std::int64_t, 2, 1>;

inline constexpr double kDefaultTMax = 1e6;

struct ParticleState {
  Vec2 pos;
  Vec2 dir;  // unit
};

struct ObstacleHit {
  double time;      // travel distance
  Lattice2 center;  // lattice point of the obstacle hit
  Vec2 point;       // impact location, |point - center| = r
  Vec2 normal;      // (point - center)/r, points into Z_r
  double impact;    // impact parameter of the incoming direction at `point`
};

struct Capped {
  double t_max;
};

using PathResult = std::variant<ObstacleHit, Capped>;

/// a*b - c*d with a single rounding error (Kahan's fma trick).
inline double diff_of_products(double a, double b, double c, double d) {
  const double w = d * c;
  const double e = std::fma(-d, c, w);
  const double f = std::fma(a, b, -w);
  return f + e;
}

template <class Derived1, class Derived2>
auto cross2(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Specular reflection v - 2 (v.n) n.
template <class Scalar>
Eigen::Matrix<Scalar, 2, 1> reflect(const Eigen::Matrix<Scalar, 2, 1>& v,
                                    const Eigen::Matrix<Scalar, 2, 1>& n) {
  return v - Scalar(2) * v.dot(n) * n;
}

/// Counterclockwise rotation R[theta] v.
template <class Scalar>
Eigen::Matrix<Scalar, 2, 1> rotate(const Eigen::Matrix<Scalar, 2, 1>& v, Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(theta), s = sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Perpendicular (-v_y, v_x).
template <class Scalar>
Eigen::Matrix<Scalar, 2, 1> perp(const Eigen::Matrix<Scalar, 2, 1>& v) {
  return {-v.y(), v.x()};
}

/// Distance from `pos` to the nearest lattice point.
double lattice_distance(const Vec2& pos);

/**
 * First obstacle hit along pos + t dir, t in (0, t_max].
 *
 * Walks the unit cells crossed by the ray and tests the lattice corners of
 * each; since r < 1/2 every disk the ray meets has its center on a corner of
 * a visited cell. Throws InvalidRadius or InsideObstacle.
 */
PathResult free_path(const Vec2& pos, const Vec2& dir, double r, double t_max = kDefaultTMax);

/**
 * Same as free_path but for the line origin + t w with an arbitrary nonzero
 * (not necessarily unit) direction w. Returned times are Euclidean
 * distances. Slopes given as w = (1, alpha) keep alpha exact, which is what
 * the transfer map comparison needs at tiny r.
 */
PathResult trace_line(const Vec2& origin, const Vec2& w, double r, double t_max = kDefaultTMax);

/// h = n_x x v with n_x = (center - point)/r. Throws NotOnSurface.
double impact_parameter(const Vec2& point, const Vec2& dir, const Lattice2& center, double r);

struct MapStep {
  ParticleState state;  // on the obstacle, outgoing
  double flight;
  Lattice2 center;
  double impact;
};

/// One step of the billiard map: fly to the next obstacle, reflect.
std::variant<MapStep, Capped> billiard_map(const ParticleState& state, double r,
                                           double t_max = kDefaultTMax);

/// Billiard flow for total path length t (exact partial final leg).
ParticleState billiard_flow(const ParticleState& state, double r, double t,
                            double t_max_leg = kDefaultTMax);

void check_radius(double r);

}  // namespace lorentz
