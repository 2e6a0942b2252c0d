#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "lorentz/freepath.hpp"
#include "lorentz/io.hpp"
#include "lorentz/stats.hpp"

using namespace lorentz;

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class F>
Moments collect(std::uint64_t n, std::uint64_t seed, F&& f) {
  Rng rng(seed);
  Moments m;
  for (std::uint64_t i = 0; i < n; ++i) m.add(f(rng));
  return m;
}

}  // namespace

TEST_CASE("sample_mu_r: acceptance rate and position") {
  Rng rng(41);
  const double r = 0.3;
  std::uint64_t attempts = 0;
  const std::uint64_t n = 1000000;
  Moments mx, my;
  std::vector<double> angles;
  angles.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const ParticleState s = sample_mu_r(rng, r, &attempts);
    mx.add(s.pos.x());
    my.add(s.pos.y());
    CHECK_FALSE(s.pos.x() < 0.0);
    CHECK(s.pos.x() < 1.0);
    angles.push_back(std::atan2(s.dir.y(), s.dir.x()));
  }
  const double rate = double(n) / double(attempts);
  CHECK(rate == doctest::Approx(1.0 - kPi * r * r).epsilon(0.003));
  CHECK(std::abs(mx.mean - 0.5) < 3 * mx.stderr_mean());
  CHECK(std::abs(my.mean - 0.5) < 3 * my.stderr_mean());
  const double D = ks_statistic(angles, [](double a) { return (a + kPi) / (2 * kPi); });
  CHECK(D < ks_critical(n));
}

TEST_CASE("sample_mu_r: never inside an obstacle") {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const ParticleState s = sample_mu_r(rng, 0.4);
    const Vec2 c(std::round(s.pos.x()), std::round(s.pos.y()));
    CHECK((s.pos - c).norm() > 0.4);
  }
}

TEST_CASE("sample_nu_r: uniform impact parameter and cosine weighting") {
  Rng rng(43);
  const double r = 0.1;
  const int n = 200000;
  std::vector<double> hs;
  Moments cosine;
  for (int i = 0; i < n; ++i) {
    const NuSample s = sample_nu_r(rng, r);
    const double vn = s.state.dir.dot(s.normal);
    CHECK(vn > 0.0);
    CHECK(s.state.pos.norm() == doctest::Approx(r));
    cosine.add(vn);
    hs.push_back(cross2(s.normal, s.state.dir));
  }
  CHECK(ks_statistic(hs, [](double h) { return 0.5 * (h + 1.0); }) < ks_critical(n));
  CHECK(std::abs(cosine.mean - kPi / 4) < 4 * cosine.stderr_mean());
}

TEST_CASE("estimate_phi_r: basic shape") {
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  const SurvivalCurve c = estimate_phi_r(0.05, grid, 20000, 400.0, McOptions{44, 0});
  CHECK(c.value[0] == 1.0);
  CHECK(c.stderr_[0] == 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(c.value[i] <= c.value[i - 1]);
    const double expect = std::sqrt(c.value[i] * (1 - c.value[i]) / double(c.n_samples));
    CHECK(c.stderr_[i] == doctest::Approx(expect));
  }
}

TEST_CASE("estimate_phi_r: small radius approaches the limit law") {
  const SurvivalCurve c = estimate_phi_r(0.005, {1.0}, 100000, 100.0, McOptions{45, 0});
  CHECK(std::abs(c.value[0] - analytic_phi(1.0)) < 3 * c.stderr_[0] + 0.01);
}

TEST_CASE("estimate_phi_r: empirical envelope at r = 0.05") {
  std::vector<double> grid;
  for (double t = 1.0; t <= 50.0; t *= 1.5) grid.push_back(t);
  const SurvivalCurve c = estimate_phi_r(0.05, grid, 50000, 5000.0, McOptions{46, 0});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(grid[i] * c.value[i] >= 0.05);
    CHECK(grid[i] * c.value[i] <= 1.0);
  }
}

TEST_CASE("estimate_phi_r: two radii agree") {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  const SurvivalCurve a = estimate_phi_r(0.01, grid, 50000, 400.0, McOptions{47, 0});
  const SurvivalCurve b = estimate_phi_r(0.005, grid, 50000, 400.0, McOptions{48, 0});
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(a.value[i] - b.value[i]) < 3 * std::hypot(a.stderr_[i], b.stderr_[i]) + 0.01);
}

TEST_CASE("estimate_phi_r: reproducible for a fixed seed") {
  const std::vector<double> grid{0.5, 1.0};
  const SurvivalCurve a = estimate_phi_r(0.05, grid, 10000, 100.0, McOptions{49, 3});
  const SurvivalCurve b = estimate_phi_r(0.05, grid, 10000, 100.0, McOptions{49, 5});
  CHECK(a.value == b.value);
}

TEST_CASE("analytic_g") {
  const double c = 24.0 / (kPi * kPi);
  CHECK(analytic_g(0.5) == doctest::Approx(2.431708).epsilon(1e-6));
  CHECK(analytic_g(0.0) == doctest::Approx(c));
  CHECK(analytic_g(2.0) == doctest::Approx(c * (0.5 + 0.5 * std::log(0.5))).epsilon(1e-12));
  CHECK(analytic_g(2.0) == doctest::Approx(0.373075).epsilon(1e-4));
  CHECK(std::abs(analytic_g(1.0 + 1e-9) - c) < 1e-6);
  CHECK(std::isfinite(analytic_g(2.0 - 1e-300)));
  // the large-s series and the closed form agree where they meet
  CHECK(analytic_g(20.0 - 1e-9) == doctest::Approx(analytic_g(20.0 + 1e-9)).epsilon(1e-9));
  for (double s : {5.0, 50.0, 500.0}) CHECK(analytic_g(s) > 0.0);
}

TEST_CASE("analytic_phi") {
  CHECK(std::abs(analytic_phi(0.0) - 1.0) < 1e-6);
  const double t = 1e3;
  const double scaled = kPi * kPi * t * analytic_phi(t);
  CHECK(scaled >= 0.99);
  CHECK(scaled <= 1.01);
  const double hh = 1e-3;
  const double second = (analytic_phi(0.5 + hh) - 2 * analytic_phi(0.5) + analytic_phi(0.5 - hh)) / (hh * hh);
  // Phi'' in scaled time t equals g(2t), with g in units of 1/(2r)
  CHECK(std::abs(second - analytic_g(1.0)) < 1e-4);
  double prev = analytic_phi(0.0);
  for (double x = 0.1; x < 20.0; x += 0.1) {
    const double v = analytic_phi(x);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("santalo_mean_free_path") {
  CHECK(santalo_mean_free_path(0.1) == doctest::Approx(4.842920).epsilon(1e-6));
  CHECK(1e-6 * santalo_mean_free_path(1e-6) == doctest::Approx(0.5).epsilon(1e-9));
  const MeanEstimate m = nu_mean_free_path(0.1, 100000, McOptions{50, 0});
  CHECK(std::abs(m.mean - santalo_mean_free_path(0.1)) < 3 * m.stderr_);
}

TEST_CASE("dumas_identity_check") {
  const DumasResult lin = dumas_identity_check(0.1, DumasFn::Linear, 100000, McOptions{51, 0});
  CHECK(lin.rhs == doctest::Approx(2 * kPi * (1 - kPi * 0.01)).epsilon(1e-12));
  CHECK(std::abs(lin.lhs - lin.rhs) < 3 * lin.sigma);
  const DumasResult ex = dumas_identity_check(0.2, DumasFn::OneMinusExp, 100000, McOptions{52, 0});
  CHECK(std::abs(ex.lhs - ex.rhs) < 3 * ex.sigma);
}

TEST_CASE("mu_r mean free path grows with the cap") {
  double prev = 0.0;
  for (double cap : {1e2, 1e3, 1e4}) {
    const MeanEstimate m = capped_mean_scaled_path(0.05, cap, 100000, McOptions{53, 0});
    CHECK(m.mean > prev + 0.05);
    prev = m.mean;
  }
}

TEST_CASE("survival CSV") {
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const SurvivalCurve c = estimate_phi_r(0.1, grid, 1000, 200.0, McOptions{54, 1});
  std::ostringstream os;
  write_survival_csv(os, c);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,phi,stderr,phi_analytic");
  int rows = 0;
  while (std::getline(in, line)) {
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 3);
    ++rows;
  }
  CHECK(rows == 3);
}
