// SPDX-License-Identifier: Apache-2.0
#include "lorentz/freepath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kG0 = 24.0 / (kPi * kPi);

// Taylor coefficients of the bracket of g in u = 1/s, c[k] for k = 3..21.
constexpr std::array<double, 22> kTail = {
    0.0,           0.0,          0.0,           2.0 / 3,        1.0 / 2,       7.0 / 15,
    1.0 / 2,       62.0 / 105,   3.0 / 4,       127.0 / 126,    17.0 / 12,     1022.0 / 495,
    31.0 / 10,     2047.0 / 429, 15.0 / 2,      16382.0 / 1365, 5461.0 / 280,  32767.0 / 1020,
    1285.0 / 24,   262142.0 / 2907, 1533.0 / 10, 524287.0 / 1995};

constexpr double kSeriesFrom = 20.0;

double g_bracket(double s) {
  if (s >= kSeriesFrom) {
    const double u = 1.0 / s;
    double acc = 0.0;
    for (std::size_t k = kTail.size() - 1; k >= 3; --k) acc = (acc + kTail[k]) * u;
    return acc * u * u;
  }
  const double x = 1.0 - 1.0 / s;
  const double y = std::abs(1.0 - 2.0 / s);
  const double last = y > 0.0 ? 0.5 * y * y * std::log(y) : 0.0;
  return 1.0 / s + 2.0 * x * x * std::log(x) - last;
}

// int_S^inf (s - T) s^-k ds for k >= 3
double tail_moment(double S, double T, int k) {
  return std::pow(S, 2 - k) / (k - 2) - T * std::pow(S, 1 - k) / (k - 1);
}

double series_tail(double S, double T) {
  double sum = 0.0;
  for (int k = 3; k < int(kTail.size()); ++k) sum += kTail[k] * tail_moment(S, T, k);
  return kG0 * sum;
}

}  // namespace

ParticleState sample_mu_r(Rng& rng, double r, std::uint64_t* attempts) {
  check_radius(r);
  Vec2 x;
  for (;;) {
    if (attempts) ++*attempts;
    x = Vec2(rng.uniform(), rng.uniform());
    if (lattice_distance(x) > r) break;
  }
  const double phi = 2.0 * kPi * rng.uniform();
  return {x, Vec2(std::cos(phi), std::sin(phi))};
}

NuSample sample_nu_r(Rng& rng, double r) {
  check_radius(r);
  const double phi = 2.0 * kPi * rng.uniform();
  const Vec2 n(std::cos(phi), std::sin(phi));
  // angle theta from the normal has density cos(theta)/2, so sin(theta) is uniform
  const double h = rng.uniform(-1.0, 1.0);
  const Vec2 v = std::sqrt(1.0 - h * h) * n + h * perp(n);
  return {{r * n, v}, n};
}

SurvivalCurve estimate_phi_r(double r, const std::vector<double>& t_grid, std::uint64_t n_samples,
                             double t_cap, const McOptions& opt) {
  check_radius(r);
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw Error(ErrorCode::DomainError, "t_grid must be increasing");
  if (!t_grid.empty() && t_cap < t_grid.back())
    throw Error(ErrorCode::DomainError, "t_cap must be at least max(t_grid)");
  const std::size_t m = t_grid.size();
  using Counts = std::vector<std::uint64_t>;

  // counts[j] = number of samples whose scaled path exceeds exactly j grid points
  Counts counts = run_chunked(
      n_samples, opt, Counts(m + 1, 0),
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Counts c(m + 1, 0);
        for (std::uint64_t i = begin; i < end; ++i) {
          const ParticleState st = sample_mu_r(rng, r);
          const PathResult res = free_path(st.pos, st.dir, r, t_cap / r);
          const double scaled = std::holds_alternative<Capped>(res)
                                    ? std::numeric_limits<double>::infinity()
                                    : r * std::get<ObstacleHit>(res).time;
          const auto j = std::lower_bound(t_grid.begin(), t_grid.end(), scaled) - t_grid.begin();
          ++c[std::size_t(j)];
        }
        return c;
      },
      [](Counts& acc, const Counts& c) {
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += c[j];
      });

  SurvivalCurve sc;
  sc.t_grid = t_grid;
  sc.n_samples = n_samples;
  sc.r = r;
  sc.value.resize(m);
  sc.stderr_.resize(m);
  // survivors of t_i: scaled > t_i, i.e. exceeding at least i+1 grid points
  std::uint64_t above = 0;
  for (std::size_t i = m; i-- > 0;) {
    above += counts[i + 1];
    const double p = double(above) / double(n_samples);
    sc.value[i] = p;
    sc.stderr_[i] = std::sqrt(p * (1.0 - p) / double(n_samples));
  }
  return sc;
}

double analytic_g(double s) {
  if (s < 0.0) throw Error(ErrorCode::DomainError, "g needs s >= 0");
  if (s <= 1.0) return kG0;
  return kG0 * g_bracket(s);
}

double analytic_phi(double t) {
  if (t < 0.0) throw Error(ErrorCode::DomainError, "Phi needs t >= 0");
  const double T = 2.0 * t;
  if (T >= kSeriesFrom) return 0.25 * series_tail(T, T);

  std::vector<double> breaks{T};
  for (double b : {1.0, 2.0})
    if (b > T) breaks.push_back(b);
  breaks.push_back(kSeriesFrom);
  const auto integrand = [T](double s) { return (s - T) * analytic_g(s); };
  const double body = quad::adaptive_simpson_pieces(integrand, breaks, 1e-13);
  return 0.25 * (body + series_tail(kSeriesFrom, T));
}

double santalo_mean_free_path(double r) {
  check_radius(r);
  return (1.0 - kPi * r * r) / (2.0 * r);
}

MeanEstimate nu_mean_free_path(double r, std::uint64_t n, const McOptions& opt) {
  check_radius(r);
  const Moments mom = run_chunked(
      n, opt, Moments{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Moments m;
        for (std::uint64_t i = begin; i < end; ++i) {
          const NuSample s = sample_nu_r(rng, r);
          const PathResult res = free_path(s.state.pos, s.state.dir, r);
          m.add(std::holds_alternative<Capped>(res) ? kDefaultTMax
                                                    : std::get<ObstacleHit>(res).time);
        }
        return m;
      },
      [](Moments& acc, const Moments& m) { acc.merge(m); });
  return {mom.mean, mom.stderr_mean(), mom.n};
}

DumasResult dumas_identity_check(double r, DumasFn f, std::uint64_t n, const McOptions& opt) {
  check_radius(r);
  auto fval = [f](double z) { return f == DumasFn::Linear ? z : -std::expm1(-z); };
  auto fder = [f](double z) { return f == DumasFn::Linear ? 1.0 : std::exp(-z); };
  auto tau = [r](const ParticleState& st) {
    const PathResult res = free_path(st.pos, st.dir, r);
    return std::holds_alternative<Capped>(res) ? kDefaultTMax : std::get<ObstacleHit>(res).time;
  };

  using Pair = std::array<Moments, 2>;
  const Pair mom = run_chunked(
      n, opt, Pair{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Pair p;
        for (std::uint64_t i = begin; i < end; ++i) {
          p[0].add(fval(tau(sample_nu_r(rng, r).state)));
          p[1].add(fder(tau(sample_mu_r(rng, r))));
        }
        return p;
      },
      [](Pair& acc, const Pair& p) {
        acc[0].merge(p[0]);
        acc[1].merge(p[1]);
      });

  // |Gamma+| weighted by v.n: circumference 2 pi r times int_{v.n>0} v.n dv = 2
  const double lhs_mass = 4.0 * kPi * r;
  const double rhs_mass = 2.0 * kPi * (1.0 - kPi * r * r);
  const double sl = lhs_mass * mom[0].stderr_mean();
  const double sr = rhs_mass * mom[1].stderr_mean();
  return {lhs_mass * mom[0].mean, rhs_mass * mom[1].mean, std::hypot(sl, sr)};
}

MeanEstimate capped_mean_scaled_path(double r, double t_cap, std::uint64_t n, const McOptions& opt) {
  const Moments mom = run_chunked(
      n, opt, Moments{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Moments m;
        for (std::uint64_t i = begin; i < end; ++i) {
          const ParticleState st = sample_mu_r(rng, r);
          const PathResult res = free_path(st.pos, st.dir, r, t_cap / r);
          m.add(std::holds_alternative<Capped>(res)
                    ? t_cap
                    : std::min(t_cap, r * std::get<ObstacleHit>(res).time));
        }
        return m;
      },
      [](Moments& acc, const Moments& m) { acc.merge(m); });
  return {mom.mean, mom.stderr_mean(), mom.n};
}

}  // namespace lorentz
