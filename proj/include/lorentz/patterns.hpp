// SPDX-License-Identifier: Apache-2.0
//
// Collision patterns (A, B, Q, Sigma), the three-branch transfer map and channels.
//
// Flight lengths returned by the transfer maps are measured in units of
// 1/(2r): s = 2r * distance. In these units a pattern satisfies the area
// identity A Q + B Q' + (1-A-B)(Q+Q') = 1.
#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/cf_farey.hpp"
#include "lorentz/geometry.hpp"

namespace lorentz {

struct CollisionPattern {
  double A = 0, B = 0, Q = 0, Q_prime = 0;
  int Sigma = 1;
  std::int64_t N = 0, k = 0;
  double eps = 0, alpha = 0;
};

struct TransferOutcome {
  double s;    // scaled flight length
  double h;    // impact parameter at the next obstacle
  int branch;  // 1, 2 or 3 for the explicit map; 0 when unknown
};

/// eps = 2 r sqrt(1 + alpha^2).
double pattern_eps(double alpha, double r);

/// Pattern of slope alpha at radius r. Throws EpsTooLarge if eps >= 1.
CollisionPattern collision_pattern(double alpha, double r);

/// Pattern from a precomputed expansion (it must reach d_n <= eps) and eps directly.
CollisionPattern collision_pattern_eps(const CfExpansion& cf, double eps);

/// Pattern with only (A, B, Q, Sigma) known; Q' is derived from the area identity.
CollisionPattern pattern_from_abq(double A, double B, double Q, int Sigma);

TransferOutcome transfer_explicit(const CollisionPattern& pattern, double h_prime);

/**
 * Ray-traced transfer map for slope alpha in (0, 1): depart from the obstacle
 * at the origin with impact parameter h_prime along v = (1, alpha)/|(1, alpha)|.
 * Throws NoCollision if nothing is hit within 1e3/r.
 */
TransferOutcome transfer_exact(double alpha, double r, double h_prime);

/// Dihedral symmetry taking a direction to the octant 0 <= v_y <= v_x.
struct OctantMap {
  int sx = 1, sy = 1;  // sign flips applied first
  bool swap = false;   // then exchange coordinates
  double alpha = 0;    // slope in the reduced octant

  int orientation() const { return sx * sy * (swap ? -1 : 1); }
  Vec2 apply(const Vec2& v) const;
};

OctantMap octant_reduce(const Vec2& dir);

/// transfer_exact for an arbitrary unit direction, reduced through the octant symmetry.
TransferOutcome transfer_exact_dir(const Vec2& dir, double r, double h_prime);

/// Ray traced transfer for a unit direction with no symmetry reduction.
TransferOutcome transfer_trace_dir(const Vec2& dir, double r, double h_prime);

struct Channel {
  std::int64_t p, q;
  double width;
};

/// Coprime (p, q) in the closed first quadrant with p^2 + q^2 < 1/(4 r^2).
std::vector<Channel> channel_set(double r);

/// Lower bound on Phi_r(t) from the slabs of directions around each channel.
double channel_lower_bound(double r, double t);

}  // namespace lorentz
