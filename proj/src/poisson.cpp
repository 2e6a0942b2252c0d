// SPDX-License-Identifier: Apache-2.0
#include "lorentz/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "lorentz/error.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(double n, double r) {
  if (!(n > 0.0)) throw Error(ErrorCode::DomainError, "intensity n must be positive");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidRadius, "r must be positive");
}

// Accumulates E x1, E x2, E x1^2, E x2^2 and velocity means.
struct MomentAcc {
  std::array<Moments, 4> x;
  std::array<Moments, 2> v;
  std::uint64_t recollided = 0;
  std::vector<double> angles;

  void add(const ParticleState& s) {
    x[0].add(s.pos.x());
    x[1].add(s.pos.y());
    x[2].add(s.pos.x() * s.pos.x());
    x[3].add(s.pos.y() * s.pos.y());
    v[0].add(s.dir.x());
    v[1].add(s.dir.y());
  }

  void merge(const MomentAcc& o) {
    for (int i = 0; i < 4; ++i) x[i].merge(o.x[i]);
    for (int i = 0; i < 2; ++i) v[i].merge(o.v[i]);
    recollided += o.recollided;
    angles.insert(angles.end(), o.angles.begin(), o.angles.end());
  }

  MomentReport report(std::uint64_t n_paths) const {
    MomentReport r;
    for (int i = 0; i < 4; ++i) {
      r.mean[i] = x[i].mean;
      r.stderr_[i] = x[i].stderr_mean();
    }
    r.mean_v = {v[0].mean, v[1].mean};
    r.mass = double(x[0].n) / double(n_paths);
    r.recollision_fraction = double(recollided) / double(n_paths);
    r.final_angles = angles;
    return r;
  }
};

}  // namespace

ObstacleSet sample_obstacles(Rng& rng, const PoissonConfig& cfg) {
  check_config(cfg.n, cfg.r);
  std::poisson_distribution<std::int64_t> count(cfg.n * cfg.window.area());
  const std::int64_t k = count(rng);
  ObstacleSet set;
  set.centers.reserve(std::size_t(k));
  for (std::int64_t i = 0; i < k; ++i)
    set.centers.emplace_back(rng.uniform(cfg.window.lo.x(), cfg.window.hi.x()),
                             rng.uniform(cfg.window.lo.y(), cfg.window.hi.y()));
  return set;
}

LazyPoissonField::LazyPoissonField(double n, double r, std::uint64_t seed, const Vec2& start)
    : n_(n), r_(r), cell_(std::max(r, std::sqrt(2.0 / n))), seed_(seed), start_(start) {
  check_config(n, r);
}

const std::vector<Vec2>& LazyPoissonField::cell(std::int64_t cx, std::int64_t cy) {
  const auto key = std::make_pair(cx, cy);
  if (auto it = cells_.find(key); it != cells_.end()) return it->second;
  Rng rng(seed_, mix_seed(std::uint64_t(cx), std::uint64_t(cy)));
  std::poisson_distribution<std::int64_t> count(n_ * cell_ * cell_);
  const std::int64_t k = count(rng);
  std::vector<Vec2> centers;
  centers.reserve(std::size_t(k));
  for (std::int64_t i = 0; i < k; ++i) {
    const Vec2 c((double(cx) + rng.uniform()) * cell_, (double(cy) + rng.uniform()) * cell_);
    // NaN-padding keeps indices stable when a covering disk is dropped
    if ((c - start_).squaredNorm() < r_ * r_)
      centers.emplace_back(std::nan(""), std::nan(""));
    else
      centers.push_back(c);
  }
  return cells_.emplace(key, std::move(centers)).first->second;
}

std::optional<PoissonHit> LazyPoissonField::first_hit(const Vec2& p, const Vec2& v, double t_max) {
  const double L = cell_;
  auto ix = std::int64_t(std::floor(p.x() / L));
  auto iy = std::int64_t(std::floor(p.y() / L));
  const int sx = v.x() > 0 ? 1 : -1, sy = v.y() > 0 ? 1 : -1;
  const double r2 = r_ * r_;

  std::optional<PoissonHit> best;
  double best_t = kInf;
  std::set<std::pair<std::int64_t, std::int64_t>> tested;

  auto test_block = [&](std::int64_t bx, std::int64_t by) {
    for (std::int64_t cx = bx - 1; cx <= bx + 1; ++cx)
      for (std::int64_t cy = by - 1; cy <= by + 1; ++cy) {
        if (!tested.emplace(cx, cy).second) continue;
        const auto& cs = cell(cx, cy);
        for (std::size_t i = 0; i < cs.size(); ++i) {
          const Vec2 d = cs[i] - p;
          const double along = d.dot(v);
          if (!(along > 0.0)) continue;  // also skips dropped (NaN) entries
          const double cr = cross2(v, d);
          const double disc = r2 - cr * cr;
          if (disc <= 1e-12 * r2) continue;
          const double t = std::max(0.0, along - std::sqrt(disc));
          if (t < best_t && t <= t_max) {
            best_t = t;
            const Vec2 point = p + t * v;
            best = PoissonHit{t, cs[i], {cx, cy, std::int64_t(i)}, (point - cs[i]) / r_};
          }
        }
      }
  };

  test_block(ix, iy);
  for (;;) {
    const double nx = double(ix + (sx > 0 ? 1 : 0)) * L;
    const double ny = double(iy + (sy > 0 ? 1 : 0)) * L;
    const double tx = v.x() != 0.0 ? (nx - p.x()) / v.x() : kInf;
    const double ty = v.y() != 0.0 ? (ny - p.y()) / v.y() : kInf;
    const double t_cell = std::min(tx, ty);
    if (t_cell > std::min(best_t, t_max)) break;
    if (tx <= ty)
      ix += sx;
    else
      iy += sy;
    test_block(ix, iy);
  }
  if (best) best->normal.normalize();
  return best;
}

PoissonFreePath poisson_free_path(const PoissonConfig& cfg, std::uint64_t n_samples,
                                  const std::vector<double>& t_grid, const McOptions& opt) {
  check_config(cfg.n, cfg.r);
  const double horizon = 50.0 / cfg.sigma();
  using Times = std::vector<double>;
  Times times = run_chunked(
      n_samples, opt, Times{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Times out;
        out.reserve(end - begin);
        for (std::uint64_t i = begin; i < end; ++i) {
          LazyPoissonField field(cfg.n, cfg.r, rng(), Vec2::Zero());
          const double phi = 2.0 * kPi * rng.uniform();
          const auto hit = field.first_hit(Vec2::Zero(), Vec2(std::cos(phi), std::sin(phi)), horizon);
          out.push_back(hit ? hit->time : kInf);
        }
        return out;
      },
      [](Times& acc, const Times& t) { acc.insert(acc.end(), t.begin(), t.end()); });

  PoissonFreePath res;
  res.curve.t_grid = t_grid;
  res.curve.n_samples = n_samples;
  res.curve.r = cfg.r;
  for (double t : t_grid) {
    const auto k = std::count_if(times.begin(), times.end(), [t](double x) { return x > t; });
    const double p = double(k) / double(n_samples);
    res.curve.value.push_back(p);
    res.curve.stderr_.push_back(std::sqrt(p * (1.0 - p) / double(n_samples)));
  }
  res.times = std::move(times);
  return res;
}

ParticleState gallavotti_initial(Rng& rng) {
  const Vec2 x(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
  const double th = rng.uniform(-0.25 * kPi, 0.25 * kPi);
  return {x, Vec2(std::cos(th), std::sin(th))};
}

double sample_deflection(Rng& rng) { return 2.0 * std::acos(1.0 - 2.0 * rng.uniform()); }

MomentReport lorentz_mc(double sigma, const InitialSampler& f_in, double t, std::uint64_t n_paths,
                        const McOptions& opt, bool keep_angles) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::DomainError, "sigma must be positive");
  if (t < 0.0) throw Error(ErrorCode::DomainError, "t must be non-negative");
  const MomentAcc acc = run_chunked(
      n_paths, opt, MomentAcc{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        MomentAcc a;
        for (std::uint64_t i = begin; i < end; ++i) {
          ParticleState s = f_in(rng);
          double remaining = t;
          for (;;) {
            const double tau = rng.exponential(sigma);
            if (tau >= remaining) break;
            s.pos += tau * s.dir;
            remaining -= tau;
            s.dir = rotate(s.dir, sample_deflection(rng));
          }
          s.pos += remaining * s.dir;
          a.add(s);
          if (keep_angles) a.angles.push_back(std::atan2(s.dir.y(), s.dir.x()));
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.report(n_paths);
}

MomentReport poisson_billiard(const PoissonConfig& cfg, const InitialSampler& f_in, double t,
                              std::uint64_t n_paths, const McOptions& opt) {
  check_config(cfg.n, cfg.r);
  const MomentAcc acc = run_chunked(
      n_paths, opt, MomentAcc{},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        MomentAcc a;
        for (std::uint64_t i = begin; i < end; ++i) {
          ParticleState s = f_in(rng);
          LazyPoissonField field(cfg.n, cfg.r, rng(), s.pos);
          std::set<std::array<std::int64_t, 3>> seen;
          bool recollided = false;
          double remaining = t;
          while (remaining > 0.0) {
            const auto hit = field.first_hit(s.pos, s.dir, remaining);
            if (!hit) {
              s.pos += remaining * s.dir;
              break;
            }
            s.pos = hit->center + cfg.r * hit->normal;
            s.dir = reflect(s.dir, hit->normal).normalized();
            remaining -= hit->time;
            if (!seen.insert(hit->id).second) recollided = true;
          }
          a.add(s);
          if (recollided) ++a.recollided;
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.report(n_paths);
}

GallavottiReport gallavotti_comparison(double sigma, const InitialSampler& f_in, double t,
                                       std::uint64_t n_paths, const std::vector<double>& r_values,
                                       const McOptions& opt) {
  GallavottiReport rep;
  rep.sigma = sigma;
  rep.t = t;
  rep.r_values = r_values;
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    PoissonConfig cfg;
    cfg.r = r_values[i];
    cfg.n = sigma / (2.0 * cfg.r);
    McOptions o = opt;
    o.seed = mix_seed(opt.seed, 1000 + i);
    rep.billiard.push_back(poisson_billiard(cfg, f_in, t, n_paths, o));
  }
  McOptions o = opt;
  o.seed = mix_seed(opt.seed, 999);
  rep.lorentz = lorentz_mc(sigma, f_in, t, n_paths, o);
  return rep;
}

}  // namespace lorentz
