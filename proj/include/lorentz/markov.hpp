// SPDX-License-Identifier: Apache-2.0
//
// Boltzmann-Grad limit objects: the pattern measure m, the transition
// density P(s, h | h'), the Markov chain and jump process built on them,
// and a solver for the x- and v-independent limit equation.
//
// Two length scales appear. transition_density(), sample_transition() and
// the pattern measure use pattern units (s = 2 r tau, mean 1). Everything
// kinetic (chain, jump process, initial datum, solver) uses r tau, where the
// kernel is P_kin(s, h | h') = 2 P(2s, h | h') and the mean flight is 1/2.
#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "lorentz/parallel.hpp"
#include "lorentz/patterns.hpp"
#include "lorentz/random.hpp"

namespace lorentz {

struct PatternSample {
  double A, B, Q;
  int Sigma;
};

/// Exact sampler of m; `proposals` (if given) counts proposals including the accepted one.
PatternSample sample_m(Rng& rng, std::uint64_t* proposals = nullptr);

/// Density of m_0 with respect to dA dB dQ.
double m_density(double A, double B, double Q);

/**
 * E_m[F] by tensor Gauss-Legendre after B = (1-A) beta, Q = u/(2-A-B).
 * `q_breaks` lists Q values where F is discontinuous in Q.
 */
double m_expectation(const std::function<double(double, double, double, int)>& F,
                     const std::vector<double>& q_breaks = {}, int order = 48);

/// P(s, h | h') in pattern units.
double transition_density(double s, double h, double h_prime);

/// 2 P(2s, h | h'): the kernel in kinetic units.
double transition_density_kinetic(double s, double h, double h_prime);

/**
 * P(., h | h') as a function of s: piecewise of the form c0/s + c1 between
 * known breakpoints, so its moments integrate in closed form.
 */
class TransitionSlice {
 public:
  TransitionSlice(double h, double h_prime);

  /// int_{lo}^{hi} s^moment P(s, h | h') ds (pattern units), moment in {0, 1}.
  double integral(double lo, double hi, int moment = 0) const;

  /// out[i] += weight * int_{i width}^{(i+1) width} P ds for i < n, in one sweep.
  void accumulate_cells(double width, int n, double weight, double* out) const;

  /// P vanishes for s beyond this value.
  double support_end() const { return support_; }

 private:
  double a_, b_, support_;
  std::vector<double> breaks_;
};

/// int int s^moment P(s, h | h') ds dh over [0, s_max] x [-1, 1] (pattern units).
double transition_moment(double h_prime, int moment, double s_max = 1e300);

/// Next (s, h) in pattern units: a draw from m pushed through the transfer map.
TransferOutcome sample_transition(Rng& rng, double h_prime);

struct ChainStep {
  double s;  // kinetic units
  double h;
  Vec2 v;
};

/// Velocity after a collision with impact parameter h.
Vec2 collision_rotate(const Vec2& v, double h);

std::vector<ChainStep> markov_chain(Rng& rng, double s0, double h0, std::size_t n_steps,
                                    const Vec2& v0 = Vec2(1.0, 0.0));

struct ExtendedState {
  Vec2 x;
  Vec2 v;
  double s;  // kinetic time to the next collision
  double h;  // impact parameter at that collision
};

/// Run the extended jump process for time t; `jumps` (if given) counts collisions.
ExtendedState extended_jump_process(Rng& rng, const ExtendedState& init, double t,
                                    std::uint64_t* jumps = nullptr);

/// Exact draw of (s, h) from the normalised initial density; x = 0, v = v0.
ExtendedState sample_initial_extended(Rng& rng, const Vec2& v0 = Vec2(1.0, 0.0));

/// F(0, s, h) = int dh' int_s^inf P_kin(tau, h | h') dtau (kinetic units, f_in = 1).
double initial_extended_density(double s, double h);

struct HomogeneousGrid {
  double s_max = 20.0;
  double ds = 0.01;
  int nh = 41;

  int ns() const { return int(std::lround(s_max / ds)); }
  double dh() const { return 2.0 / (nh - 1); }
  double s_center(int i) const { return (i + 0.5) * ds; }
  double h_node(int j) const { return -1.0 + j * dh(); }
  double h_weight(int j) const { return (j == 0 || j == nh - 1) ? 0.5 * dh() : dh(); }
};

struct HomogeneousField {
  HomogeneousGrid grid;
  Eigen::MatrixXd values;  // ns x nh, cell averages in s at h nodes
  double time = 0.0;

  double mass() const;
};

/**
 * Explicit upwind solver for (d_t - d_s) F = int P_kin(s, h | h') F(t, 0, h') dh'.
 * The collision source uses cell masses of the kernel, renormalised per h'
 * column so the discrete scheme conserves mass to rounding.
 */
class HomogeneousSolver {
 public:
  explicit HomogeneousSolver(const HomogeneousGrid& grid);

  const HomogeneousGrid& grid() const { return grid_; }

  /// Largest deviation of a raw kernel column mass from 1 over interior h' nodes.
  double kernel_column_error() const { return column_error_; }

  /// Mass beyond s_max in the h' = +-1 columns, where the support in s is unbounded
  /// near h = -h'.
  double kernel_endpoint_deficit() const { return endpoint_deficit_; }

  /// Cell-averaged initial datum built from the kernel.
  HomogeneousField initial_field() const;

  /// Advance F0 to t_end. Throws CflViolation if dt > ds.
  HomogeneousField solve(const HomogeneousField& F0, double t_end, double dt,
                         std::vector<double>* mass_history = nullptr) const;

 private:
  HomogeneousGrid grid_;
  Eigen::MatrixXd kernel_;  // (ns*nh) x nh: mass of cell (i, j) given h' node k
  double column_error_ = 0.0;
  double endpoint_deficit_ = 0.0;
};

HomogeneousField solve_homogeneous(const HomogeneousField& F0, double t_end, double dt);

/// Stationary h-marginal of the jump chain by power iteration on nbins bins.
std::vector<double> stationary_h_marginal(int nbins = 200, double tol = 1e-10);

/**
 * Logarithmic radius average of F(collision_pattern(alpha, r)) over r in
 * [eta, 1/4] (geometric grid with ratio 1.005, trapezoid in ln r).
 */
double radius_ergodic_average(const std::function<double(const CollisionPattern&)>& F,
                              double alpha, double eta);

/// Probability masses on an (s, h) rectangle grid; mass at s beyond the last edge goes to `overflow`.
struct Histogram2 {
  std::vector<double> s_edges, h_edges;
  Eigen::MatrixXd mass;  // (s bins) x (h bins)
  double overflow = 0.0;
};

std::vector<double> uniform_edges(double lo, double hi, int bins);

/// Empirical histogram of sample_transition(h') (pattern units), normalised by n.
Histogram2 transition_histogram(double h_prime, std::uint64_t n, const std::vector<double>& s_edges,
                                const std::vector<double>& h_edges, const McOptions& opt);

/// Exact bin masses of P(., . | h') on the same grid.
Histogram2 transition_bin_masses(double h_prime, const std::vector<double>& s_edges,
                                 const std::vector<double>& h_edges);

/// Final (s, h) of n jump-process paths started from the initial datum, run to time t.
Histogram2 jump_process_histogram(double t, std::uint64_t n, const std::vector<double>& s_edges,
                                  const std::vector<double>& h_edges, const McOptions& opt);

/// Bin masses of a solver field, normalised to total mass 1.
Histogram2 field_histogram(const HomogeneousField& F, const std::vector<double>& s_edges,
                           const std::vector<double>& h_edges);

/// Sum of |a - b| over all cells and the overflow.
double l1_distance(const Histogram2& a, const Histogram2& b);

/// Expected L1 distance of an n-sample histogram from its exact masses (normal approximation).
double l1_null_expectation(const Histogram2& exact, std::uint64_t n);

}  // namespace lorentz
