// SPDX-License-Identifier: Apache-2.0
//
// Random Lorentz gas: Poisson-distributed disks of radius r with intensity n,
// billiard transport among them, and the linear Lorentz equation with rate
// sigma = 2 n r solved by Monte Carlo.
#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lorentz/freepath.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

struct Window {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  double area() const { return (hi - lo).prod(); }
};

struct PoissonConfig {
  double n = 1.0;  // obstacles per unit area
  double r = 0.01;
  Window window;

  double sigma() const { return 2.0 * n * r; }
};

struct ObstacleSet {
  std::vector<Vec2> centers;
};

/// Poisson(n |window|) centers, uniform in the window; overlaps allowed.
ObstacleSet sample_obstacles(Rng& rng, const PoissonConfig& cfg);

struct PoissonHit {
  double time;
  Vec2 center;
  std::array<std::int64_t, 3> id;  // cell x, cell y, index in cell
  Vec2 normal;                     // (point - center)/r
};

/**
 * Poisson configuration on the whole plane, generated cell by cell on first
 * use from a per-cell stream of `seed`; the result does not depend on the
 * order cells are visited. Obstacles covering `start` are removed, which is
 * exactly the Poisson law conditioned on `start` being free.
 */
class LazyPoissonField {
 public:
  LazyPoissonField(double n, double r, std::uint64_t seed, const Vec2& start);

  std::optional<PoissonHit> first_hit(const Vec2& p, const Vec2& v, double t_max);

  double cell_size() const { return cell_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
      return std::size_t(mix_seed(std::uint64_t(k.first), std::uint64_t(k.second)));
    }
  };
  const std::vector<Vec2>& cell(std::int64_t cx, std::int64_t cy);

  double n_, r_, cell_;
  std::uint64_t seed_;
  Vec2 start_;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<Vec2>, KeyHash> cells_;
};

struct PoissonFreePath {
  SurvivalCurve curve;
  std::vector<double> times;  // first-collision times, in sample order
};

/// First-collision times from the origin, a fresh configuration per sample.
PoissonFreePath poisson_free_path(const PoissonConfig& cfg, std::uint64_t n_samples,
                                  const std::vector<double>& t_grid, const McOptions& opt);

using InitialSampler = std::function<ParticleState(Rng&)>;

/// x uniform on [-1/2, 1/2]^2, direction angle uniform on [-pi/4, pi/4].
ParticleState gallavotti_initial(Rng& rng);

struct MomentReport {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();    // E x1, E x2, E x1^2, E x2^2
  Eigen::Vector4d stderr_ = Eigen::Vector4d::Zero();
  Eigen::Vector2d mean_v = Eigen::Vector2d::Zero();
  double mass = 0.0;  // total weight / n_paths
  double recollision_fraction = 0.0;
  std::vector<double> final_angles;  // kept when requested
};

/// Uniform density of deflection angles: beta = 2 arccos(1 - 2U) on [0, 2 pi].
double sample_deflection(Rng& rng);

/// Linear Lorentz equation by a jump process with rate sigma and the hard-disk deflection law.
MomentReport lorentz_mc(double sigma, const InitialSampler& f_in, double t, std::uint64_t n_paths,
                        const McOptions& opt, bool keep_angles = false);

/// Billiard among Poisson obstacles, fresh configuration per path.
MomentReport poisson_billiard(const PoissonConfig& cfg, const InitialSampler& f_in, double t,
                              std::uint64_t n_paths, const McOptions& opt);

struct GallavottiReport {
  double sigma = 0.0, t = 0.0;
  std::vector<double> r_values;
  std::vector<MomentReport> billiard;
  MomentReport lorentz;
};

GallavottiReport gallavotti_comparison(double sigma, const InitialSampler& f_in, double t,
                                       std::uint64_t n_paths, const std::vector<double>& r_values,
                                       const McOptions& opt);

}  // namespace lorentz
