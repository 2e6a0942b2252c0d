// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/geometry.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

struct SurvivalCurve {
  std::vector<double> t_grid;
  std::vector<double> value;
  std::vector<double> stderr_;
  std::uint64_t n_samples = 0;
  double r = 0.0;
};

/// Uniform point of the unit cell outside the disk, uniform direction.
ParticleState sample_mu_r(Rng& rng, double r, std::uint64_t* attempts = nullptr);

struct NuSample {
  ParticleState state;  // pos on the circle |pos| = r, dir leaving the obstacle
  Vec2 normal;          // pos / r
};

/// Billiard-map invariant measure: uniform on the circle, density ~ v.n over the outgoing half.
NuSample sample_nu_r(Rng& rng, double r);

/// Survival of r * tau_r under mu_r on t_grid; paths capped at t_cap/r count as survivors.
SurvivalCurve estimate_phi_r(double r, const std::vector<double>& t_grid, std::uint64_t n_samples,
                             double t_cap, const McOptions& opt);

/// Boca-Zaharescu density g(s).
double analytic_g(double s);

/**
 * Limit survival function Phi(t) = 1/4 * int_{2t}^inf (s - 2t) g(s) ds, the
 * normalisation for which Phi(0) = 1 and pi^2 t Phi(t) -> 1 (g integrates
 * to 4 and is expressed in units of 1/(2r)).
 */
double analytic_phi(double t);

/// (1 - pi r^2) / (2r).
double santalo_mean_free_path(double r);

struct MeanEstimate {
  double mean;
  double stderr_;
  std::uint64_t n;
};

/// Monte Carlo mean of tau_r under nu_r.
MeanEstimate nu_mean_free_path(double r, std::uint64_t n, const McOptions& opt);

enum class DumasFn { Linear, OneMinusExp };

struct DumasResult {
  double lhs, rhs, sigma;
};

/// Both sides of int_{Gamma+} f(tau) v.n dS dv = int f'(tau) dx dv (unnormalised measures).
DumasResult dumas_identity_check(double r, DumasFn f, std::uint64_t n, const McOptions& opt);

/// Mean of min(r tau_r, t_cap) under mu_r.
MeanEstimate capped_mean_scaled_path(double r, double t_cap, std::uint64_t n, const McOptions& opt);

}  // namespace lorentz
