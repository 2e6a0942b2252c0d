// SPDX-License-Identifier: Apache-2.0
//
// Continued fractions, the Gauss map and Farey fractions.
//
// Indexing follows the recursions
//   p_{n+1} = a_{n-1} p_n + p_{n-1},   p_0 = 1, p_1 = 0,
//   q_{n+1} = a_{n-1} q_n + q_{n-1},   q_0 = 0, q_1 = 1,
//   d_{n+1} = d_{n-1} - a_{n-1} d_n,   d_0 = 1, d_1 = alpha,
// with a_k = floor(1 / T^k alpha) stored 0-based, so p_{n+2}/q_{n+2} = [0; a_0, ..., a_n]
// and d_n = |q_n alpha - p_n|.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace lorentz {

struct CfExpansion {
  double alpha = 0.0;
  std::vector<std::int64_t> a;  // a[k] = floor(1/T^k alpha)
  std::vector<std::int64_t> p;  // p[0..size-1]
  std::vector<std::int64_t> q;
  std::vector<double> d;        // d[n] = |q_n alpha - p_n|, exact for the binary value of alpha

  std::size_t size() const { return d.size(); }
};

inline constexpr double kDefaultEpsMin = 1e-12;

/**
 * Expands alpha (taken as the exact rational it is in binary) until the first
 * d_n <= eps_min, the expansion terminates, or a quotient exceeds 1e15.
 * Euclid runs on 128-bit integers, so d_n and the identity
 * q_n d_{n+1} + q_{n+1} d_n = 1 are exact.
 *
 * Throws DomainError unless 0 < alpha < 1, PrecisionExhausted if eps_min < 1e-14.
 */
CfExpansion cf_expand(double alpha, double eps_min = kDefaultEpsMin);

/// Tx = 1/x - floor(1/x). Throws DomainError for x outside (0, 1).
double gauss_map(double x);

/// Gauss measure of [lo, hi]: (ln(1+hi) - ln(1+lo)) / ln 2.
double gauss_measure(double lo, double hi);

struct FareyPair {
  std::int64_t Q;
  std::int64_t p, q;          // left neighbour p/q < alpha
  std::int64_t p_hat, q_hat;  // right neighbour p_hat/q_hat > alpha
};

/// Adjacent fractions of F_Q around alpha by batched Stern-Brocot descent.
/// Throws AlphaIsFarey if alpha is (within 1e-15) an element of F_Q.
FareyPair farey_adjacent(double alpha, std::int64_t Q);

/// Calls visit(q, q_hat) for each pair of consecutive denominators in F_Q, i.e. every
/// coprime 0 < q, q_hat <= Q < q + q_hat, via the next-term recurrence.
void for_each_farey_pair(std::int64_t Q, const std::function<void(std::int64_t, std::int64_t)>& visit);

/// (1/Q^2) sum of psi(q/Q, q_hat/Q) over consecutive Farey denominators.
double farey_pair_average(const std::function<double(double, double)>& psi, std::int64_t Q);

}  // namespace lorentz
