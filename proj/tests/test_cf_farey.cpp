#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lorentz/cf_farey.hpp"
#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/random.hpp"
#include "oracles.hpp"

using namespace lorentz;

namespace {

const double kSqrt2m1 = std::sqrt(2.0) - 1.0;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

void check_identities(const CfExpansion& cf) {
  const double alpha = cf.alpha;
  for (std::size_t n = 1; n + 1 < cf.size(); ++n) {
    const std::int64_t an = cf.a[n - 1];
    CHECK(cf.p[n + 1] == an * cf.p[n] + cf.p[n - 1]);
    CHECK(cf.q[n + 1] == an * cf.q[n] + cf.q[n - 1]);
    CHECK(cf.d[n + 1] == doctest::Approx(cf.d[n - 1] - an * cf.d[n]).epsilon(1e-15));
  }
  for (std::size_t n = 0; n + 1 < cf.size(); ++n) {
    CHECK(std::abs(cf.q[n] * cf.d[n + 1] + cf.q[n + 1] * cf.d[n] - 1.0) < 1e-12);
    CHECK(cf.d[n + 1] < cf.d[n]);
    CHECK(cf.d[n] <= std::ldexp(1.0, -int(n / 2)));
    CHECK(std::abs(std::fabs(std::fma(double(cf.q[n]), alpha, -double(cf.p[n]))) - cf.d[n]) < 1e-15);
  }
}

}  // namespace

TEST_CASE("cf_expand: golden mean against the exact quadratic expansion") {
  const CfExpansion cf = cf_expand(kGolden);
  std::vector<std::int64_t> a;
  std::vector<long double> orbit;
  oracle::QuadraticIrrational{-1, 5, 2}.expand(20, a, orbit);
  for (int k = 0; k < 20; ++k) CHECK(cf.a[k] == a[k]);
  CHECK(cf.d[3] == doctest::Approx(0.236068).epsilon(1e-6));
  long double d = 1.0L;
  for (int n = 0; n <= 20; ++n) {
    CHECK(std::abs(cf.d[n] - double(d)) < 1e-12);
    d *= orbit[n];
  }
  check_identities(cf);
}

TEST_CASE("cf_expand: sqrt2 - 1") {
  const CfExpansion cf = cf_expand(kSqrt2m1);
  std::vector<std::int64_t> a;
  std::vector<long double> orbit;
  oracle::QuadraticIrrational{-1, 2, 1}.expand(15, a, orbit);
  for (int k = 0; k < 15; ++k) CHECK(cf.a[k] == 2);
  CHECK(a[0] == 2);
  const std::vector<std::int64_t> q{0, 1, 2, 5, 12, 29, 70};
  for (std::size_t n = 0; n < q.size(); ++n) CHECK(cf.q[n] == q[n]);
  CHECK(cf.d[3] == doctest::Approx(5 * kSqrt2m1 - 2).epsilon(1e-12));
  CHECK(cf.d[3] == doctest::Approx(0.0710678).epsilon(1e-6));
  for (int n = 0; n < 15; ++n) CHECK(cf.d[n] == doctest::Approx(std::pow(kSqrt2m1, n)).epsilon(1e-10));
  check_identities(cf);
}

TEST_CASE("cf_expand: identities and products on random slopes") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = rng.uniform(1e-3, 1.0 - 1e-3);
    const CfExpansion cf = cf_expand(alpha);
    check_identities(cf);
    // d_n = prod_{k<n} T^k alpha, with the orbit iterated in double only while it is accurate
    double x = alpha, prod = 1.0;
    for (std::size_t n = 0; n < cf.size() && prod > 1e-4; ++n) {
      CHECK(cf.d[n] == doctest::Approx(prod).epsilon(1e-7));
      if (x <= 0.0) break;
      prod *= x;
      x = gauss_map(x);
    }
  }
}

TEST_CASE("cf_expand: truncated series for q_n d_{n-1}") {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const double alpha = rng.uniform(0.01, 0.99);
    const CfExpansion cf = cf_expand(alpha);
    std::vector<double> orbit;  // orbit[k] = T^k alpha = d_{k+1} / d_k
    for (std::size_t k = 0; k + 1 < cf.size(); ++k) orbit.push_back(cf.d[k + 1] / cf.d[k]);
    auto partial = [&](int n, int j_lo) {
      double sum = 0.0;
      for (int j = j_lo; j <= n; ++j) {
        double prod = 1.0;
        for (int k = j; k <= n - 1; ++k) prod *= orbit[k - 1] * orbit[k];
        sum += ((n - j) % 2 == 0 ? 1.0 : -1.0) * prod;
      }
      return sum;
    };
    for (int n = 2; n < 12 && n < int(cf.size()); ++n) {
      const double exact = double(cf.q[n]) * cf.d[n - 1];
      CHECK(exact == doctest::Approx(partial(n, 1)).epsilon(1e-9));
      for (int l = 0; l < n; ++l)
        CHECK(std::abs(exact - partial(n, std::max(1, n - l))) <= std::ldexp(1.0, -l) + 1e-12);
    }
  }
}

TEST_CASE("cf_expand: errors") {
  CHECK_THROWS_AS(cf_expand(0.0), Error);
  CHECK_THROWS_AS(cf_expand(1.5), Error);
  try {
    cf_expand(0.3, 1e-15);
    FAIL("expected PrecisionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
  // a binary rational terminates with d = 0
  const CfExpansion half = cf_expand(0.375);
  CHECK(half.d.back() == 0.0);
}

TEST_CASE("gauss_map") {
  CHECK(gauss_map(kSqrt2m1) == doctest::Approx(kSqrt2m1).epsilon(1e-12));
  CHECK(gauss_map(0.4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_map(0.0), Error);
  CHECK_THROWS_AS(gauss_map(1.0), Error);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = rng.uniform(1e-3, 1.0 - 1e-3);
    const CfExpansion a = cf_expand(alpha);
    const double t = gauss_map(alpha);
    if (t < 1e-9) continue;
    const CfExpansion b = cf_expand(t);
    // the shift property holds while both expansions are exact for the same number;
    // T alpha rounds once, so compare only the leading digits
    for (std::size_t n = 0; n < 10 && n + 1 < a.a.size() && n < b.a.size(); ++n) {
      if (a.d[n + 2] < 1e-7) break;
      CHECK(b.a[n] == a.a[n + 1]);
    }
  }
}

TEST_CASE("gauss_measure") {
  CHECK(gauss_measure(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(gauss_measure(0.0, 0.5) == doctest::Approx(std::log(1.5) / std::log(2.0)));
  CHECK(gauss_measure(0.0, 0.5) == doctest::Approx(0.5849625).epsilon(1e-7));

  double x = M_PI - 3.0;
  long count = 0;
  const long n = 1000000;
  for (long k = 0; k < n; ++k) {
    if (x < 0.5) ++count;
    x = gauss_map(x);
    if (x <= 0.0) x = 0.5 * M_SQRT2 - 0.5;  // restart on exact rationals
  }
  CHECK(double(count) / n == doctest::Approx(0.585).epsilon(0.002 / 0.585));
}

TEST_CASE("theta * T(theta) < 1/2") {
  Rng rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double t = rng.uniform(1e-9, 1.0);
    CHECK(t * gauss_map(t) < 0.5);
  }
}

TEST_CASE("farey_adjacent: examples") {
  const FareyPair a = farey_adjacent(0.618, 5);
  CHECK(a.p == 3);
  CHECK(a.q == 5);
  CHECK(a.p_hat == 2);
  CHECK(a.q_hat == 3);
  const FareyPair b = farey_adjacent(0.5 - 1e-9, 2);
  CHECK(b.p == 0);
  CHECK(b.q == 1);
  CHECK(b.p_hat == 1);
  CHECK(b.q_hat == 2);
  CHECK_THROWS_AS(farey_adjacent(0.4, 5), Error);
  try {
    farey_adjacent(0.5, 7);
    FAIL("expected AlphaIsFarey");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphaIsFarey);
  }
}

TEST_CASE("farey_adjacent matches exhaustive enumeration") {
  Rng rng(6);
  for (std::int64_t Q : {1, 2, 3, 5, 8, 13, 40, 97, 300}) {
    const auto seq = oracle::farey_sequence(Q);
    for (int i = 0; i < 100; ++i) {
      const double alpha = rng.uniform(1e-6, 1.0 - 1e-6);
      std::size_t j = 0;
      while (j + 1 < seq.size() && double(seq[j + 1].p) <= alpha * double(seq[j + 1].q)) ++j;
      if (std::abs(alpha * double(seq[j].q) - double(seq[j].p)) < 1e-12) continue;
      const FareyPair f = farey_adjacent(alpha, Q);
      CHECK(f.p == seq[j].p);
      CHECK(f.q == seq[j].q);
      CHECK(f.p_hat == seq[j + 1].p);
      CHECK(f.q_hat == seq[j + 1].q);
      CHECK(f.p_hat * f.q - f.p * f.q_hat == 1);
      CHECK(f.q + f.q_hat > Q);
      CHECK(std::gcd(f.p, f.q) == 1);
    }
  }
}

TEST_CASE("farey_adjacent: large levels and convergent denominators") {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const double alpha = rng.uniform(1e-3, 1.0 - 1e-3);
    const std::int64_t Q = std::int64_t(rng.uniform(2.0, 1e6));
    const FareyPair f = farey_adjacent(alpha, Q);
    CHECK(f.p_hat * f.q - f.p * f.q_hat == 1);
    CHECK(f.q <= Q);
    CHECK(f.q_hat <= Q);
    CHECK(f.q + f.q_hat > Q);
    CHECK(double(f.p) < alpha * double(f.q));
    CHECK(double(f.p_hat) > alpha * double(f.q_hat));
    // one of the neighbours is the convergent with d_N <= 1/Q < d_{N-1}
    const CfExpansion cf = cf_expand(alpha, std::max(1e-14, 0.5 / double(Q)));
    std::size_t N = 0;
    while (cf.d[N] > 1.0 / double(Q)) ++N;
    CHECK((f.q == cf.q[N] || f.q_hat == cf.q[N]));
  }
}

TEST_CASE("farey_pair_average") {
  CHECK(farey_pair_average([](double x, double y) { return x + y; }, 1) == doctest::Approx(2.0));
  const double c = farey_pair_average([](double, double) { return 1.0; }, 1000);
  CHECK(std::abs(c - 3.0 / (M_PI * M_PI)) < 1e-3);

  // enumeration count equals the coprime pair count by brute force
  for (std::int64_t Q : {1, 7, 50}) {
    std::int64_t brute = 0, rec = 0;
    for (std::int64_t q = 1; q <= Q; ++q)
      for (std::int64_t qh = 1; qh <= Q; ++qh)
        if (q + qh > Q && std::gcd(q, qh) == 1) ++brute;
    for_each_farey_pair(Q, [&](std::int64_t q, std::int64_t qh) {
      CHECK(std::gcd(q, qh) == 1);
      CHECK(q + qh > Q);
      ++rec;
    });
    CHECK(rec == brute);
  }

  const double xy = farey_pair_average([](double x, double y) { return x * y; }, 2000);
  // (6/pi^2) int_{x+y>1, x,y<1} xy by nested quadrature
  const double limit = 6.0 / (M_PI * M_PI) *
                       quad::adaptive_simpson(
                           [](double x) {
                             return quad::adaptive_simpson([x](double y) { return x * y; }, 1.0 - x, 1.0, 1e-13);
                           },
                           0.0, 1.0, 1e-12);
  CHECK(std::abs(xy / limit - 1.0) < 0.005);
}
