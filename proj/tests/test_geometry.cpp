#include <doctest.h>

#include <cmath>

#include "lorentz/geometry.hpp"
#include "lorentz/random.hpp"
#include "oracles.hpp"

using namespace lorentz;

namespace {

const ObstacleHit& as_hit(const PathResult& r) {
  REQUIRE(std::holds_alternative<ObstacleHit>(r));
  return std::get<ObstacleHit>(r);
}

// Start outside every obstacle, uniformly in the unit cell.
Vec2 free_point(Rng& rng, double r) {
  for (;;) {
    Vec2 p(rng.uniform(), rng.uniform());
    if (lattice_distance(p) > r) return p;
  }
}

Vec2 random_dir(Rng& rng) {
  const double a = rng.uniform(0.0, 2.0 * M_PI);
  return {std::cos(a), std::sin(a)};
}

}  // namespace

TEST_CASE("free_path: horizontal channel is capped") {
  const PathResult r = free_path({0.5, 0.5}, {1.0, 0.0}, 0.1, 100.0);
  REQUIRE(std::holds_alternative<Capped>(r));
  CHECK(std::get<Capped>(r).t_max == 100.0);
}

TEST_CASE("free_path: collinear hit") {
  const ObstacleHit h = as_hit(free_path({0.5, 0.0}, {1.0, 0.0}, 0.1, 100.0));
  CHECK(h.time == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(h.center == Lattice2(1, 0));
  CHECK(h.point.x() == doctest::Approx(0.9));
  CHECK(h.point.y() == doctest::Approx(0.0));
  CHECK(h.normal.x() == doctest::Approx(-1.0));
  CHECK(std::abs(h.normal.y()) < 1e-15);
}

TEST_CASE("free_path: single instance against center enumeration") {
  const Vec2 pos(0.2, 0.3);
  const Vec2 dir(std::cos(0.7), std::sin(0.7));
  const double r = 0.05, t_max = 100.0;
  const auto ref = oracle::free_path(pos.x(), pos.y(), dir.x(), dir.y(), r, t_max);
  REQUIRE(ref.has_value());
  const ObstacleHit h = as_hit(free_path(pos, dir, r, t_max));
  CHECK(h.center == Lattice2(ref->cx, ref->cy));
  CHECK(std::abs(h.time - double(ref->time)) < 1e-10);
}

TEST_CASE("free_path agrees with brute force on random instances") {
  Rng rng(2024);
  const double t_max = 30.0;
  int hits = 0, capped = 0;
  for (double r : {0.05, 0.1, 0.2}) {
    for (int i = 0; i < 3334; ++i) {
      const Vec2 pos = free_point(rng, r) + Vec2(double(int(rng.uniform(-50, 50))), 0.0);
      const Vec2 dir = random_dir(rng);
      const auto ref = oracle::free_path(pos.x(), pos.y(), dir.x(), dir.y(), r, t_max);
      const PathResult res = free_path(pos, dir, r, t_max);
      if (!ref) {
        CHECK(std::holds_alternative<Capped>(res));
        ++capped;
        continue;
      }
      const ObstacleHit& h = as_hit(res);
      CHECK(h.center == Lattice2(ref->cx, ref->cy));
      CHECK(std::abs(h.time - double(ref->time)) < 1e-10);
      CHECK(std::abs((h.point - h.center.cast<double>()).norm() - r) < 1e-10);
      ++hits;
    }
  }
  CHECK(hits > 9000);
  MESSAGE("hits " << hits << ", capped " << capped);
}

TEST_CASE("free_path: translation by lattice vectors") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.1;
    const Vec2 pos = free_point(rng, r);
    const Vec2 dir = random_dir(rng);
    const Lattice2 k(std::int64_t(rng.uniform(-1e3, 1e3)), std::int64_t(rng.uniform(-1e3, 1e3)));
    const ObstacleHit a = as_hit(free_path(pos, dir, r));
    const ObstacleHit b = as_hit(free_path(pos + k.cast<double>(), dir, r));
    CHECK(b.center - a.center == k);
    CHECK(a.time == doctest::Approx(b.time).epsilon(1e-12));
  }
}

TEST_CASE("free_path: invalid inputs") {
  CHECK_THROWS_AS(free_path({0.5, 0.5}, {1, 0}, 0.5), Error);
  CHECK_THROWS_AS(free_path({0.5, 0.5}, {1, 0}, 0.0), Error);
  try {
    free_path({0.05, 0.0}, {1, 0}, 0.1);
    FAIL("expected InsideObstacle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsideObstacle);
  }
  try {
    free_path({0.5, 0.5}, {1, 0}, 0.7);
    FAIL("expected InvalidRadius");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRadius);
  }
}

TEST_CASE("reflect") {
  const Vec2 a = reflect(Vec2(1, 0), Vec2(-1, 0));
  CHECK(a.x() == doctest::Approx(-1.0));
  CHECK(a.y() == doctest::Approx(0.0));
  const Vec2 b = reflect(Vec2(1, 0), Vec2(0, 1));
  CHECK(b.x() == doctest::Approx(1.0));
  CHECK(b.y() == doctest::Approx(0.0));
  const double s = std::sqrt(0.5);
  const Vec2 c = reflect(Vec2(s, s), Vec2(0, -1));
  CHECK(c.x() == doctest::Approx(s));
  CHECK(c.y() == doctest::Approx(-s));
  CHECK(std::abs(c.norm() - 1.0) < 1e-12);
}

TEST_CASE("billiard_map: bouncing between adjacent disks") {
  ParticleState s{{0.5, 0.0}, {1.0, 0.0}};
  auto step = billiard_map(s, 0.1);
  REQUIRE(std::holds_alternative<MapStep>(step));
  const MapStep m1 = std::get<MapStep>(step);
  CHECK(m1.flight == doctest::Approx(0.4));
  CHECK(m1.state.pos.x() == doctest::Approx(0.9));
  CHECK(m1.state.dir.x() == doctest::Approx(-1.0));

  const MapStep m2 = std::get<MapStep>(billiard_map(m1.state, 0.1));
  CHECK(m2.flight == doctest::Approx(0.8));
  CHECK(m2.state.pos.x() == doctest::Approx(0.1));
  CHECK(m2.center == Lattice2(0, 0));
  CHECK(m2.state.dir.x() == doctest::Approx(1.0));
}

TEST_CASE("billiard_map equals free_path followed by reflect (brute force)") {
  Rng rng(11);
  const double r = 0.15;
  for (int i = 0; i < 500; ++i) {
    // random outgoing point on the obstacle at the origin
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const Vec2 n(std::cos(phi), std::sin(phi));
    const double h = rng.uniform(-0.99, 0.99);
    const Vec2 v = std::sqrt(1 - h * h) * n + h * perp(n);
    const ParticleState st{r * n, v};
    const auto ref = oracle::free_path(st.pos.x(), st.pos.y(), v.x(), v.y(), r, 50.0L);
    const auto out = billiard_map(st, r, 50.0);
    if (!ref) {
      CHECK(std::holds_alternative<Capped>(out));
      continue;
    }
    const MapStep m = std::get<MapStep>(out);
    CHECK(m.center == Lattice2(ref->cx, ref->cy));
    CHECK(std::abs(m.flight - double(ref->time)) < 1e-10);
    const Vec2 nn = (m.state.pos - m.center.cast<double>()) / r;
    const Vec2 expect = v - 2.0 * v.dot(nn) * nn;
    CHECK((m.state.dir - expect).norm() < 1e-10);
    CHECK(m.state.dir.dot(nn) > 0.0);
  }
}

TEST_CASE("billiard_flow") {
  SUBCASE("zero time is the identity") {
    const ParticleState s{{0.3, 0.4}, {0.6, 0.8}};
    const ParticleState o = billiard_flow(s, 0.1, 0.0);
    CHECK(o.pos == s.pos);
    CHECK(o.dir == s.dir);
  }
  SUBCASE("channel") {
    const ParticleState o = billiard_flow({{0.5, 0.5}, {1, 0}}, 0.1, 3.0);
    CHECK(o.pos.x() == doctest::Approx(3.5));
    CHECK(o.pos.y() == doctest::Approx(0.5));
    CHECK(o.dir.x() == doctest::Approx(1.0));
  }
  SUBCASE("semigroup") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const double r = 0.1;
      const ParticleState s{free_point(rng, r), random_dir(rng)};
      const double t1 = rng.uniform(0, 10), t2 = rng.uniform(0, 10);
      const ParticleState a = billiard_flow(billiard_flow(s, r, t1), r, t2);
      const ParticleState b = billiard_flow(s, r, t1 + t2);
      CHECK((a.pos - b.pos).norm() < 1e-9);
      CHECK((a.dir - b.dir).norm() < 1e-9);
    }
  }
  SUBCASE("time reversibility") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const double r = 0.2, t = 5.0;
      const ParticleState s{free_point(rng, r), random_dir(rng)};
      ParticleState f = billiard_flow(s, r, t);
      f.dir = -f.dir;
      const ParticleState back = billiard_flow(f, r, t);
      CHECK((back.pos - s.pos).norm() < 1e-8);
      CHECK((back.dir + s.dir).norm() < 1e-8);
    }
  }
}

TEST_CASE("speed is conserved over many reflections") {
  Rng rng(9);
  ParticleState s{free_point(rng, 0.2), random_dir(rng)};
  int events = 0;
  while (events < 10000) {
    const auto out = billiard_map(s, 0.2);
    REQUIRE(std::holds_alternative<MapStep>(out));
    s = std::get<MapStep>(out).state;
    ++events;
  }
  CHECK(std::abs(s.dir.norm() - 1.0) < 1e-12);
}

TEST_CASE("impact_parameter") {
  CHECK(impact_parameter({0.9, 0.0}, {1, 0}, Lattice2(1, 0), 0.1) == doctest::Approx(0.0));
  CHECK(std::abs(impact_parameter({1.0, 0.1}, {1, 0}, Lattice2(1, 0), 0.1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(impact_parameter({0.5, 0.0}, {1, 0}, Lattice2(1, 0), 0.1), Error);

  Rng rng(13);
  for (int i = 0; i < 10000; ++i) {
    const double r = 0.1;
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const Vec2 c(3.0, -2.0);
    const Vec2 point = c + r * Vec2(std::cos(phi), std::sin(phi));
    const Vec2 v = random_dir(rng);
    const Vec2 n_x = (c - point) / r;
    const double h0 = impact_parameter(point, v, Lattice2(3, -2), r);
    const double h1 = impact_parameter(point, reflect(v, n_x), Lattice2(3, -2), r);
    CHECK(std::abs(h0 - h1) < 1e-12);
  }
}

TEST_CASE("hit impact parameter matches the surface formula") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.05;
    const Vec2 pos = free_point(rng, r);
    const Vec2 dir = random_dir(rng);
    const PathResult res = free_path(pos, dir, r);
    if (!std::holds_alternative<ObstacleHit>(res)) continue;
    const ObstacleHit& h = std::get<ObstacleHit>(res);
    CHECK(std::abs(h.impact - impact_parameter(h.point, dir, h.center, r)) < 1e-9);
  }
}
