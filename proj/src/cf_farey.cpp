// SPDX-License-Identifier: Apache-2.0
#include "lorentz/cf_farey.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lorentz/error.hpp"

namespace lorentz {

namespace {

using u128 = unsigned __int128;

// Sign of alpha*q - p, exact because fma rounds once.
int compare_fraction(double alpha, std::int64_t p, std::int64_t q) {
  const double e = std::fma(alpha, double(q), -double(p));
  return (e > 0) - (e < 0);
}

bool is_close_fraction(double alpha, std::int64_t p, std::int64_t q) {
  return std::abs(std::fma(alpha, double(q), -double(p))) <= 1e-15 * double(q);
}

}  // namespace

CfExpansion cf_expand(double alpha, double eps_min) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " must lie in (0, 1)";
    throw Error(ErrorCode::DomainError, os.str());
  }
  if (eps_min < 1e-14)
    throw Error(ErrorCode::PrecisionExhausted, "eps_min below 1e-14 cannot be certified in double");

  // alpha = M * 2^-E with M odd or E minimal.
  int exp2 = 0;
  const double mant = std::frexp(alpha, &exp2);  // alpha = mant * 2^exp2, mant in [1/2, 1)
  std::int64_t M = std::int64_t(std::ldexp(mant, 53));
  int E = 53 - exp2;
  while (E > 0 && (M & 1) == 0) {
    M >>= 1;
    --E;
  }
  if (E > 126) throw Error(ErrorCode::PrecisionExhausted, "alpha too small for exact expansion");

  CfExpansion cf;
  cf.alpha = alpha;
  cf.p = {1, 0};
  cf.q = {0, 1};
  cf.d = {1.0, alpha};

  u128 r_prev = u128(1) << E;
  u128 r_cur = u128(M);
  while (cf.d.back() > eps_min && r_cur != 0) {
    const u128 quot = r_prev / r_cur;
    if (quot > u128(1'000'000'000'000'000ull)) break;
    const auto an = std::int64_t(quot);
    const u128 r_next = r_prev - quot * r_cur;
    const std::size_t n = cf.d.size() - 1;
    cf.a.push_back(an);
    cf.p.push_back(an * cf.p[n] + cf.p[n - 1]);
    cf.q.push_back(an * cf.q[n] + cf.q[n - 1]);
    cf.d.push_back(std::ldexp(double(r_next), -E));
    r_prev = r_cur;
    r_cur = r_next;
  }
  return cf;
}

double gauss_map(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::DomainError, "gauss_map needs x in (0, 1)");
  const double y = 1.0 / x;
  return y - std::floor(y);
}

double gauss_measure(double lo, double hi) {
  return (std::log1p(hi) - std::log1p(lo)) / std::numbers::ln2;
}

FareyPair farey_adjacent(double alpha, std::int64_t Q) {
  if (Q < 1) throw Error(ErrorCode::DomainError, "Q must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    if (alpha == 0.0 || alpha == 1.0) throw Error(ErrorCode::AlphaIsFarey, "alpha is 0 or 1");
    throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
  }
  std::int64_t pl = 0, ql = 1, pr = 1, qr = 1;
  auto check = [&](std::int64_t p, std::int64_t q) {
    if (is_close_fraction(alpha, p, q)) {
      std::ostringstream os;
      os << "alpha equals " << p << "/" << q << " in F_" << Q;
      throw Error(ErrorCode::AlphaIsFarey, os.str());
    }
  };
  check(pl, ql);
  check(pr, qr);
  for (;;) {
    if (ql + qr > Q) break;
    const std::int64_t pm = pl + pr, qm = ql + qr;
    check(pm, qm);
    if (compare_fraction(alpha, pm, qm) > 0) {
      // alpha right of the mediant: replace left by (pl + k pr)/(ql + k qr), k maximal.
      const double num = std::fma(alpha, double(ql), -double(pl));
      const double den = std::fma(-alpha, double(qr), double(pr));
      std::int64_t k = std::max<std::int64_t>(1, std::int64_t(std::floor(num / den)));
      k = std::min(k, (Q - ql) / qr);
      while (k > 1 && compare_fraction(alpha, pl + k * pr, ql + k * qr) <= 0) --k;
      while (ql + (k + 1) * qr <= Q && compare_fraction(alpha, pl + (k + 1) * pr, ql + (k + 1) * qr) > 0)
        ++k;
      pl += k * pr;
      ql += k * qr;
      check(pl, ql);
    } else {
      const double num = std::fma(-alpha, double(qr), double(pr));
      const double den = std::fma(alpha, double(ql), -double(pl));
      std::int64_t k = std::max<std::int64_t>(1, std::int64_t(std::floor(num / den)));
      k = std::min(k, (Q - qr) / ql);
      while (k > 1 && compare_fraction(alpha, pr + k * pl, qr + k * ql) >= 0) --k;
      while (qr + (k + 1) * ql <= Q && compare_fraction(alpha, pr + (k + 1) * pl, qr + (k + 1) * ql) < 0)
        ++k;
      pr += k * pl;
      qr += k * ql;
      check(pr, qr);
    }
  }
  return {Q, pl, ql, pr, qr};
}

void for_each_farey_pair(std::int64_t Q, const std::function<void(std::int64_t, std::int64_t)>& visit) {
  if (Q < 1) return;
  std::int64_t a = 0, b = 1, c = 1, d = Q;
  for (;;) {
    visit(b, d);
    if (c == d) break;
    const std::int64_t k = (Q + b) / d;
    const std::int64_t nc = k * c - a, nd = k * d - b;
    a = c;
    b = d;
    c = nc;
    d = nd;
  }
}

double farey_pair_average(const std::function<double(double, double)>& psi, std::int64_t Q) {
  const double inv = 1.0 / double(Q);
  double sum = 0.0;
  for_each_farey_pair(Q, [&](std::int64_t q, std::int64_t qh) { sum += psi(q * inv, qh * inv); });
  return sum * inv * inv;
}

}  // namespace lorentz
