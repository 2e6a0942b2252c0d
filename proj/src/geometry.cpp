// SPDX-License-Identifier: Apache-2.0
#include "lorentz/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace lorentz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inside_tolerance(const Vec2& pos) {
  const double scale = std::max(std::abs(pos.x()), std::abs(pos.y()));
  return std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * scale);
}

struct Candidate {
  double param = kInf;  // entry parameter along w
  std::int64_t cx = 0, cy = 0;
  double cr = 0.0;  // cross(w, c - f)
};

// Line f + t w in local coordinates; corners are integers relative to the base cell.
struct LineTracer {
  Vec2 f;
  Vec2 w;
  double w2;
  double r2w2;
  double cross_f;
  double dot_f;
  Candidate best;

  void test(std::int64_t cx, std::int64_t cy) {
    const double x = double(cx), y = double(cy);
    const double cr = diff_of_products(w.x(), y, w.y(), x) - cross_f;
    const double along = std::fma(w.x(), x, w.y() * y) - dot_f;
    if (along <= 0.0) return;
    const double disc = r2w2 - cr * cr;
    if (disc <= 1e-12 * r2w2) return;
    const double param = std::max(0.0, (along - std::sqrt(disc)) / w2);
    if (param < best.param) best = {param, cx, cy, cr};
  }
};

}  // namespace

void check_radius(double r) {
  if (!(r > 0.0 && r < 0.5)) {
    std::ostringstream os;
    os << "r = " << r << " must lie in (0, 1/2)";
    throw Error(ErrorCode::InvalidRadius, os.str());
  }
}

double lattice_distance(const Vec2& pos) {
  const Vec2 f(pos.x() - std::round(pos.x()), pos.y() - std::round(pos.y()));
  return f.norm();
}

PathResult trace_line(const Vec2& origin, const Vec2& w, double r, double t_max) {
  check_radius(r);
  if (!(t_max > 0.0)) throw Error(ErrorCode::DomainError, "t_max must be positive");
  if (lattice_distance(origin) < r - inside_tolerance(origin))
    throw Error(ErrorCode::InsideObstacle, "start point lies inside an obstacle");

  const double bx = std::round(origin.x()), by = std::round(origin.y());
  const Vec2 f(origin.x() - bx, origin.y() - by);  // exact

  LineTracer tr{f, w, w.squaredNorm(), 0.0, diff_of_products(w.x(), f.y(), w.y(), f.x()),
                std::fma(w.x(), f.x(), w.y() * f.y()), {}};
  tr.r2w2 = r * r * tr.w2;
  const double wn = std::sqrt(tr.w2);
  const double param_max = t_max / wn;
  const double slack = r / wn;

  std::int64_t ix = std::int64_t(std::floor(f.x()));
  std::int64_t iy = std::int64_t(std::floor(f.y()));
  const int sx = w.x() > 0 ? 1 : -1;
  const int sy = w.y() > 0 ? 1 : -1;
  const double inv_x = w.x() != 0.0 ? 1.0 / w.x() : kInf;
  const double inv_y = w.y() != 0.0 ? 1.0 / w.y() : kInf;

  tr.test(ix, iy);
  tr.test(ix + 1, iy);
  tr.test(ix, iy + 1);
  tr.test(ix + 1, iy + 1);

  for (;;) {
    const double next_x = double(ix + (sx > 0 ? 1 : 0));
    const double next_y = double(iy + (sy > 0 ? 1 : 0));
    const double tx = w.x() != 0.0 ? (next_x - f.x()) * inv_x : kInf;
    const double ty = w.y() != 0.0 ? (next_y - f.y()) * inv_y : kInf;
    const double t_cell = std::min(tx, ty);
    if (t_cell > std::min(tr.best.param, param_max) + slack) break;
    if (tx <= ty) {
      ix += sx;
      const std::int64_t far = ix + (sx > 0 ? 1 : 0);
      tr.test(far, iy);
      tr.test(far, iy + 1);
    } else {
      iy += sy;
      const std::int64_t far = iy + (sy > 0 ? 1 : 0);
      tr.test(ix, far);
      tr.test(ix + 1, far);
    }
  }

  if (!(tr.best.param * wn <= t_max)) return Capped{t_max};

  ObstacleHit hit;
  hit.time = tr.best.param * wn;
  hit.center = Lattice2(std::int64_t(bx) + tr.best.cx, std::int64_t(by) + tr.best.cy);
  const double h = std::clamp(-tr.best.cr / (wn * r), -1.0, 1.0);
  const Vec2 v = w / wn;
  const Vec2 n_x = std::sqrt(std::max(0.0, 1.0 - h * h)) * v - h * perp(v);
  hit.normal = -n_x;
  hit.point = hit.center.cast<double>() + r * hit.normal;
  hit.impact = h;
  return hit;
}

PathResult free_path(const Vec2& pos, const Vec2& dir, double r, double t_max) {
  return trace_line(pos, dir, r, t_max);
}

double impact_parameter(const Vec2& point, const Vec2& dir, const Lattice2& center, double r) {
  const Vec2 d = center.cast<double>() - point;
  if (std::abs(d.norm() - r) > 1e-8)
    throw Error(ErrorCode::NotOnSurface, "point is not on the obstacle boundary");
  const Vec2 n_x = d / r;
  return std::clamp(cross2(n_x, dir), -1.0, 1.0);
}

std::variant<MapStep, Capped> billiard_map(const ParticleState& state, double r, double t_max) {
  const PathResult res = free_path(state.pos, state.dir, r, t_max);
  if (const auto* c = std::get_if<Capped>(&res)) return *c;
  const auto& hit = std::get<ObstacleHit>(res);
  Vec2 v = reflect(state.dir, hit.normal);
  v.normalize();
  return MapStep{{hit.point, v}, hit.time, hit.center, hit.impact};
}

ParticleState billiard_flow(const ParticleState& state, double r, double t, double t_max_leg) {
  if (t < 0.0) throw Error(ErrorCode::DomainError, "flow time must be non-negative");
  ParticleState s = state;
  double remaining = t;
  while (remaining > 0.0) {
    const double leg = std::min(remaining, t_max_leg);
    const PathResult res = free_path(s.pos, s.dir, r, leg);
    if (std::holds_alternative<Capped>(res)) {
      s.pos += leg * s.dir;
      remaining -= leg;
      continue;
    }
    const auto& hit = std::get<ObstacleHit>(res);
    s.pos = hit.point;
    s.dir = reflect(s.dir, hit.normal).normalized();
    remaining -= hit.time;
  }
  return s;
}

}  // namespace lorentz
