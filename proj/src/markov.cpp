// SPDX-License-Identifier: Apache-2.0
#include "lorentz/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kSmallA = 1e-9;
constexpr double kHugeSupport = 1e12;

double pos(double x) { return x > 0.0 ? x : 0.0; }

// T1 + T2 + T3 + T4 of the closed form.
double bracket(double s, double a, double b) {
  const double sa = s * a;
  const double hi = s - 0.5 * sa;
  const double mid = 0.5 * s * (1.0 + b);
  const double t1 = pos(std::min(hi, 1.0 + 0.5 * sa) - std::max(1.0, mid));
  const double t2 = pos(std::min(hi, 1.0) - std::max(mid, 1.0 - 0.5 * sa));
  const double t3 = s < 1.0 ? std::min(sa, std::abs(1.0 - s)) : 0.0;
  const double t4 = pos(sa - std::abs(1.0 - s));
  return t1 + t2 + t3 + t4;
}

// Sorted breakpoints of dual-cell integration in h, adding the kinks at +-h'.
std::vector<double> split_at(double lo, double hi, std::initializer_list<double> kinks) {
  std::vector<double> pts{lo};
  for (double k : kinks)
    if (k > lo && k < hi) pts.push_back(k);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

PatternSample sample_m(Rng& rng, std::uint64_t* proposals) {
  for (;;) {
    if (proposals) ++*proposals;
    const double A = rng.uniform();
    const double B = (1.0 - A) * rng.uniform();
    const double Q = rng.uniform();
    if (Q * (2.0 - A - B) < 1.0) return {A, B, Q, rng.coin() ? 1 : -1};
  }
}

double m_density(double A, double B, double Q) {
  if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0 - A && Q > 0.0 && Q * (2.0 - A - B) < 1.0))
    return 0.0;
  return (12.0 / kPi2) / (1.0 - A);
}

double m_expectation(const std::function<double(double, double, double, int)>& F,
                     const std::vector<double>& q_breaks, int order) {
  const quad::GaussRule rule(order);
  const double total = rule(
      [&](double A) {
        return rule(
            [&](double beta) {
              const double B = (1.0 - A) * beta;
              const double c = 2.0 - A - B;
              std::vector<double> ub{0.0};
              for (double q : q_breaks)
                if (q * c > 0.0 && q * c < 1.0) ub.push_back(q * c);
              ub.push_back(1.0);
              std::sort(ub.begin(), ub.end());
              return rule.pieces(
                         [&](double u) {
                           const double Q = u / c;
                           return 0.5 * (F(A, B, Q, 1) + F(A, B, Q, -1));
                         },
                         ub) /
                     c;
            },
            0.0, 1.0);
      },
      0.0, 1.0);
  return (12.0 / kPi2) * total;
}

double transition_density(double s, double h, double h_prime) {
  if (!(s > 0.0)) return 0.0;
  const double a = 0.5 * std::abs(h - h_prime);
  const double b = 0.5 * std::abs(h + h_prime);
  if (a < kSmallA) return s * (1.0 + b) < 2.0 ? 3.0 / kPi2 : 0.0;
  return 3.0 / (kPi2 * s * a) * bracket(s, a, b);
}

double transition_density_kinetic(double s, double h, double h_prime) {
  return 2.0 * transition_density(2.0 * s, h, h_prime);
}

TransitionSlice::TransitionSlice(double h, double h_prime)
    : a_(0.5 * std::abs(h - h_prime)), b_(0.5 * std::abs(h + h_prime)) {
  if (a_ < kSmallA) {
    support_ = 2.0 / (1.0 + b_);
    breaks_ = {0.0, support_};
    return;
  }
  auto inv = [](double num, double den) { return den > 0.0 ? num / den : kHugeSupport; };
  const double a = a_, b = b_;
  support_ = std::min(kHugeSupport, std::max({inv(2.0, 1.0 + b - a), inv(1.0, 1.0 - a), 2.0}));
  breaks_ = {0.0,
             1.0 / (1.0 + a),
             1.0,
             1.0 / (1.0 - 0.5 * a),
             inv(1.0, 1.0 - a),
             2.0 / (1.0 + b),
             2.0 / (1.0 + b + a),
             inv(2.0, 1.0 + b - a),
             support_};
  for (auto& x : breaks_) x = std::min(x, support_);
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

double TransitionSlice::integral(double lo, double hi, int moment) const {
  if (moment != 0 && moment != 1) throw Error(ErrorCode::DomainError, "slice moments are 0 or 1");
  lo = std::max(lo, 0.0);
  hi = std::min(hi, support_);
  if (!(hi > lo)) return 0.0;
  if (a_ < kSmallA) {
    const int p = moment + 1;
    return 3.0 / kPi2 * (std::pow(hi, p) - std::pow(lo, p)) / p;
  }
  const double C = 3.0 / (kPi2 * a_);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    const double x0 = std::max(lo, breaks_[i]);
    const double x1 = std::min(hi, breaks_[i + 1]);
    if (!(x1 > x0)) continue;
    // bracket is linear on the piece: c0 + c1 s, so P = C (c0/s + c1)
    const double p0 = breaks_[i], p1 = breaks_[i + 1];
    const double y0 = bracket(p0, a_, b_), y1 = bracket(p1, a_, b_);
    const double c1 = (y1 - y0) / (p1 - p0);
    const double c0 = y0 - c1 * p0;
    if (moment == 0) {
      const double log_term = (x0 > 0.0 && c0 != 0.0) ? c0 * std::log(x1 / x0) : 0.0;
      sum += C * (log_term + c1 * (x1 - x0));
    } else {
      sum += C * (c0 * (x1 - x0) + 0.5 * c1 * (x1 * x1 - x0 * x0));
    }
  }
  return sum;
}

double transition_moment(double h_prime, int moment, double s_max) {
  const auto f = [&](double h) { return TransitionSlice(h, h_prime).integral(0.0, s_max, moment); };
  const double k = std::abs(h_prime);
  const std::vector<double> br = split_at(-1.0, 1.0, {-k, k});
  return quad::adaptive_simpson_pieces(f, br, 1e-11);
}

TransferOutcome sample_transition(Rng& rng, double h_prime) {
  const PatternSample m = sample_m(rng);
  return transfer_explicit(pattern_from_abq(m.A, m.B, m.Q, m.Sigma), h_prime);
}

Vec2 collision_rotate(const Vec2& v, double h) {
  return rotate(v, kPi - 2.0 * std::asin(std::clamp(h, -1.0, 1.0)));
}

std::vector<ChainStep> markov_chain(Rng& rng, double s0, double h0, std::size_t n_steps,
                                    const Vec2& v0) {
  if (n_steps < 1) throw Error(ErrorCode::DomainError, "markov_chain needs n_steps >= 1");
  (void)s0;
  std::vector<ChainStep> out;
  out.reserve(n_steps);
  double h = h0;
  Vec2 v = v0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const TransferOutcome t = sample_transition(rng, h);
    v = collision_rotate(v, h);
    h = t.h;
    out.push_back({0.5 * t.s, h, v});
  }
  return out;
}

ExtendedState extended_jump_process(Rng& rng, const ExtendedState& init, double t,
                                    std::uint64_t* jumps) {
  if (t < 0.0) throw Error(ErrorCode::DomainError, "jump process needs t >= 0");
  ExtendedState st = init;
  double remaining = t;
  while (st.s <= remaining) {
    st.x += st.s * st.v;
    remaining -= st.s;
    const double hp = st.h;
    const TransferOutcome o = sample_transition(rng, hp);
    st.v = collision_rotate(st.v, hp);
    st.s = 0.5 * o.s;
    st.h = o.h;
    if (jumps) ++*jumps;
  }
  st.x += remaining * st.v;
  st.s -= remaining;
  return st;
}

ExtendedState sample_initial_extended(Rng& rng, const Vec2& v0) {
  const PatternSample m = sample_m(rng);
  const CollisionPattern pt = pattern_from_abq(m.A, m.B, m.Q, m.Sigma);
  // branch weights width x kinetic length; they sum to 1 by the area identity
  const double w1 = pt.A * pt.Q;
  const double w2 = pt.B * pt.Q_prime;
  const double u = rng.uniform();
  const double v = rng.uniform();
  double x;
  if (u < w1) {
    x = 1.0 - 2.0 * pt.A * v;
  } else if (u < w1 + w2) {
    x = -1.0 + 2.0 * pt.B * v;
  } else {
    x = -1.0 + 2.0 * pt.B + 2.0 * (1.0 - pt.A - pt.B) * v;
  }
  const double hp = std::clamp(pt.Sigma * x, -1.0, 1.0);
  const TransferOutcome o = transfer_explicit(pt, hp);
  return {Vec2::Zero(), v0, 0.5 * o.s * rng.uniform_pos(), o.h};
}

double initial_extended_density(double s, double h) {
  if (s < 0.0 || std::abs(h) > 1.0) return 0.0;
  const auto f = [&](double hp) {
    return TransitionSlice(h, hp).integral(2.0 * s, std::numeric_limits<double>::infinity());
  };
  const double k = std::abs(h);
  const std::vector<double> br = split_at(-1.0, 1.0, {-k, k});
  return quad::adaptive_simpson_pieces(f, br, 1e-11);
}

double HomogeneousField::mass() const {
  double m = 0.0;
  for (int j = 0; j < grid.nh; ++j) m += grid.h_weight(j) * values.col(j).sum();
  return m * grid.ds;
}

void TransitionSlice::accumulate_cells(double width, int n, double weight, double* out) const {
  const double end = std::min(support_, n * width);
  if (a_ < kSmallA) {
    for (int i = 0; i < n && i * width < end; ++i) out[i] += weight * integral(i * width, (i + 1) * width);
    return;
  }
  const double C = weight * 3.0 / (kPi2 * a_);
  for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
    const double p0 = breaks_[p], p1 = std::min(breaks_[p + 1], end);
    if (!(p1 > p0)) continue;
    const double q1 = breaks_[p + 1];
    const double y0 = bracket(p0, a_, b_), y1 = bracket(q1, a_, b_);
    const double c1 = (y1 - y0) / (q1 - p0);
    const double c0 = y0 - c1 * p0;
    int i = int(p0 / width);
    double x0 = p0;
    while (x0 < p1 && i < n) {
      const double x1 = std::min(p1, (i + 1) * width);
      if (x1 > x0) {
        const double log_term = (x0 > 0.0 && c0 != 0.0) ? c0 * std::log(x1 / x0) : 0.0;
        out[i] += C * (log_term + c1 * (x1 - x0));
      }
      x0 = x1;
      ++i;
    }
  }
}

HomogeneousSolver::HomogeneousSolver(const HomogeneousGrid& grid) : grid_(grid) {
  const int ns = grid.ns(), nh = grid.nh;
  if (ns < 1 || nh < 3) throw Error(ErrorCode::DomainError, "solver grid too small");
  kernel_ = Eigen::MatrixXd::Zero(Eigen::Index(ns) * nh, nh);
  const quad::GaussRule rule(8);
  const double dh = grid.dh();
  const double width = 2.0 * grid.ds;  // one kinetic s-cell in pattern units

  for (int k = 0; k < nh; ++k) {
    const double hp = grid.h_node(k);
    for (int j = 0; j < nh; ++j) {
      const double lo = std::max(-1.0, grid.h_node(j) - 0.5 * dh);
      const double hi = std::min(1.0, grid.h_node(j) + 0.5 * dh);
      double* col = kernel_.col(k).data() + Eigen::Index(j) * ns;
      const std::vector<double> br = split_at(lo, hi, {-hp, hp});
      for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        const double c = 0.5 * (br[p] + br[p + 1]), half = 0.5 * (br[p + 1] - br[p]);
        for (std::size_t g = 0; g < rule.order(); ++g) {
          const double h = c + half * rule.nodes()[g];
          TransitionSlice(h, hp).accumulate_cells(width, ns, half * rule.weights()[g], col);
        }
      }
    }
    const double total = kernel_.col(k).sum();
    if (k == 0 || k == nh - 1)
      endpoint_deficit_ = std::max(endpoint_deficit_, 1.0 - total);
    else
      column_error_ = std::max(column_error_, std::abs(total - 1.0));
    kernel_.col(k) /= total;
  }
}

HomogeneousField HomogeneousSolver::initial_field() const {
  const int ns = grid_.ns(), nh = grid_.nh;
  HomogeneousField F{grid_, Eigen::MatrixXd::Zero(ns, nh), 0.0};
  const quad::GaussRule rule(8);
  constexpr int kSub = 25;
  std::vector<double> cell_mass(ns);
  for (int j = 0; j < nh; ++j) {
    const double h = grid_.h_node(j);
    std::fill(cell_mass.begin(), cell_mass.end(), 0.0);
    const std::vector<double> br = split_at(-1.0, 1.0, {-std::abs(h), std::abs(h)});
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double len = (br[p + 1] - br[p]) / kSub;
      for (int q = 0; q < kSub; ++q) {
        const double c = br[p] + (q + 0.5) * len;
        for (std::size_t g = 0; g < rule.order(); ++g)
          TransitionSlice(h, c + 0.5 * len * rule.nodes()[g])
              .accumulate_cells(2.0 * grid_.ds, ns, 0.5 * len * rule.weights()[g], cell_mass.data());
      }
    }
    // cell average of the tail int_s^inf: mass of later cells plus half of this one
    double tail = 0.0;
    for (int i = ns - 1; i >= 0; --i) {
      F.values(i, j) = tail + 0.5 * cell_mass[i];
      tail += cell_mass[i];
    }
  }
  return F;
}

HomogeneousField HomogeneousSolver::solve(const HomogeneousField& F0, double t_end, double dt,
                                          std::vector<double>* mass_history) const {
  const double ds = grid_.ds;
  if (dt > ds * (1.0 + 1e-12)) throw Error(ErrorCode::CflViolation, "dt exceeds the CFL limit ds");
  if (!(dt > 0.0) || t_end < 0.0) throw Error(ErrorCode::DomainError, "need dt > 0, t_end >= 0");
  const int ns = grid_.ns(), nh = grid_.nh;
  if (F0.values.rows() != ns || F0.values.cols() != nh)
    throw Error(ErrorCode::DomainError, "field does not match the solver grid");

  const auto steps = std::int64_t(std::ceil(t_end / dt - 1e-9));
  const double step = steps > 0 ? t_end / double(steps) : 0.0;
  const double lambda = step / ds;

  Eigen::VectorXd wh(nh);
  for (int j = 0; j < nh; ++j) wh[j] = grid_.h_weight(j);

  HomogeneousField F = F0;
  Eigen::MatrixXd next(ns, nh);
  Eigen::VectorXd outflow(nh);
  if (mass_history) mass_history->push_back(F.mass());
  for (std::int64_t n = 0; n < steps; ++n) {
    outflow = step * F.values.row(0).transpose().cwiseProduct(wh);
    const Eigen::VectorXd src = kernel_ * outflow;
    const Eigen::Map<const Eigen::MatrixXd> S(src.data(), ns, nh);
    next.topRows(ns - 1) = (1.0 - lambda) * F.values.topRows(ns - 1) + lambda * F.values.bottomRows(ns - 1);
    next.row(ns - 1) = (1.0 - lambda) * F.values.row(ns - 1);
    next += S * (wh.cwiseInverse() / ds).asDiagonal();
    F.values.swap(next);
    F.time += step;
    if (mass_history) mass_history->push_back(F.mass());
  }
  return F;
}

HomogeneousField solve_homogeneous(const HomogeneousField& F0, double t_end, double dt) {
  return HomogeneousSolver(F0.grid).solve(F0, t_end, dt);
}

std::vector<double> stationary_h_marginal(int nbins, double tol) {
  const double w = 2.0 / nbins;
  const quad::GaussRule rule(8);
  Eigen::MatrixXd M(nbins, nbins);
  for (int k = 0; k < nbins; ++k) {
    const double hp = -1.0 + (k + 0.5) * w;
    for (int j = 0; j < nbins; ++j) {
      const std::vector<double> br = split_at(-1.0 + j * w, -1.0 + (j + 1) * w, {-hp, hp});
      M(j, k) = rule.pieces([&](double h) { return TransitionSlice(h, hp).integral(0.0, kHugeSupport); }, br);
    }
    M.col(k) /= M.col(k).sum();
  }
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(nbins, 1.0 / nbins);
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd nxt = M * pi;
    nxt /= nxt.sum();
    const double diff = (nxt - pi).lpNorm<1>();
    pi = nxt;
    if (diff < tol) break;
  }
  return {pi.data(), pi.data() + nbins};
}

double radius_ergodic_average(const std::function<double(const CollisionPattern&)>& F,
                              double alpha, double eta) {
  if (!(eta > 1e-8 && eta < 1e-2))
    throw Error(ErrorCode::DomainError, "eta must lie in (1e-8, 1e-2)");
  const double r_hi = 0.25;
  const CfExpansion cf = cf_expand(alpha, std::max(1e-14, 0.5 * pattern_eps(alpha, eta)));
  const double span = std::log(r_hi / eta);
  const auto n = std::int64_t(std::ceil(span / std::log(1.005)));
  const double dl = span / double(n);
  double sum = 0.0;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double r = eta * std::exp(dl * double(i));
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * F(collision_pattern_eps(cf, pattern_eps(alpha, r)));
  }
  return sum * dl / span;
}

}  // namespace lorentz

namespace lorentz {

namespace {

Histogram2 empty_histogram(const std::vector<double>& s_edges, const std::vector<double>& h_edges) {
  if (s_edges.size() < 2 || h_edges.size() < 2)
    throw Error(ErrorCode::DomainError, "histogram needs at least one bin per axis");
  return {s_edges, h_edges, Eigen::MatrixXd::Zero(Eigen::Index(s_edges.size() - 1), Eigen::Index(h_edges.size() - 1)),
          0.0};
}

// Bin index of x in sorted edges, -1 below, size-1 at or above the last edge.
Eigen::Index bin_of(const std::vector<double>& edges, double x) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return Eigen::Index(it - edges.begin()) - 1;
}

struct Counts {
  Eigen::MatrixXd cells;
  double overflow = 0.0;
};

template <class Draw>
Histogram2 sample_histogram(std::uint64_t n, const std::vector<double>& s_edges,
                            const std::vector<double>& h_edges, const McOptions& opt, Draw&& draw) {
  Histogram2 out = empty_histogram(s_edges, h_edges);
  const Eigen::Index ns = out.mass.rows(), nh = out.mass.cols();
  const Counts c = run_chunked(
      n, opt, Counts{Eigen::MatrixXd::Zero(ns, nh), 0.0},
      [&](Rng& rng, std::uint64_t begin, std::uint64_t end) {
        Counts local{Eigen::MatrixXd::Zero(ns, nh), 0.0};
        for (std::uint64_t i = begin; i < end; ++i) {
          const auto [s, h] = draw(rng);
          const Eigen::Index bs = bin_of(s_edges, s);
          const Eigen::Index bh = std::clamp<Eigen::Index>(bin_of(h_edges, h), 0, nh - 1);
          if (bs >= ns)
            local.overflow += 1.0;
          else if (bs >= 0)
            local.cells(bs, bh) += 1.0;
        }
        return local;
      },
      [](Counts& acc, const Counts& p) {
        acc.cells += p.cells;
        acc.overflow += p.overflow;
      });
  out.mass = c.cells / double(n);
  out.overflow = c.overflow / double(n);
  return out;
}

}  // namespace

std::vector<double> uniform_edges(double lo, double hi, int bins) {
  std::vector<double> e(std::size_t(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[std::size_t(i)] = lo + (hi - lo) * i / bins;
  return e;
}

Histogram2 transition_histogram(double h_prime, std::uint64_t n, const std::vector<double>& s_edges,
                                const std::vector<double>& h_edges, const McOptions& opt) {
  return sample_histogram(n, s_edges, h_edges, opt, [h_prime](Rng& rng) {
    const TransferOutcome o = sample_transition(rng, h_prime);
    return std::pair{o.s, o.h};
  });
}

Histogram2 transition_bin_masses(double h_prime, const std::vector<double>& s_edges,
                                 const std::vector<double>& h_edges) {
  Histogram2 out = empty_histogram(s_edges, h_edges);
  const quad::GaussRule rule(16);
  const double s_hi = s_edges.back();
  for (std::size_t j = 0; j + 1 < h_edges.size(); ++j) {
    const std::vector<double> br = split_at(h_edges[j], h_edges[j + 1], {-h_prime, h_prime});
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double c = 0.5 * (br[p] + br[p + 1]), half = 0.5 * (br[p + 1] - br[p]);
      for (std::size_t g = 0; g < rule.order(); ++g) {
        const TransitionSlice slice(c + half * rule.nodes()[g], h_prime);
        const double w = half * rule.weights()[g];
        for (std::size_t i = 0; i + 1 < s_edges.size(); ++i)
          out.mass(Eigen::Index(i), Eigen::Index(j)) += w * slice.integral(s_edges[i], s_edges[i + 1]);
        out.overflow += w * slice.integral(s_hi, kHugeSupport);
      }
    }
  }
  return out;
}

Histogram2 jump_process_histogram(double t, std::uint64_t n, const std::vector<double>& s_edges,
                                  const std::vector<double>& h_edges, const McOptions& opt) {
  return sample_histogram(n, s_edges, h_edges, opt, [t](Rng& rng) {
    const ExtendedState st = extended_jump_process(rng, sample_initial_extended(rng), t);
    return std::pair{st.s, st.h};
  });
}

Histogram2 field_histogram(const HomogeneousField& F, const std::vector<double>& s_edges,
                           const std::vector<double>& h_edges) {
  Histogram2 out = empty_histogram(s_edges, h_edges);
  const HomogeneousGrid& g = F.grid;
  const Eigen::Index nhb = out.mass.cols();
  double total = 0.0;
  for (int j = 0; j < g.nh; ++j) {
    // the trapezoid weight of node j is spread over its dual interval
    const double lo = std::max(-1.0, g.h_node(j) - 0.5 * g.dh());
    const double hi = std::min(1.0, g.h_node(j) + 0.5 * g.dh());
    for (int i = 0; i < g.ns(); ++i) {
      const double m = F.values(i, j) * g.ds;
      if (m == 0.0) continue;
      total += m * (hi - lo);
      const Eigen::Index bs = bin_of(s_edges, g.s_center(i));
      if (bs < 0) continue;
      if (bs >= out.mass.rows()) {
        out.overflow += m * (hi - lo);
        continue;
      }
      for (Eigen::Index b = 0; b < nhb; ++b) {
        const double ov = std::min(hi, h_edges[std::size_t(b) + 1]) - std::max(lo, h_edges[std::size_t(b)]);
        if (ov > 0.0) out.mass(bs, b) += m * ov;
      }
    }
  }
  if (total > 0.0) {
    out.mass /= total;
    out.overflow /= total;
  }
  return out;
}

double l1_distance(const Histogram2& a, const Histogram2& b) {
  if (a.mass.rows() != b.mass.rows() || a.mass.cols() != b.mass.cols())
    throw Error(ErrorCode::DomainError, "histogram shapes differ");
  return (a.mass - b.mass).cwiseAbs().sum() + std::abs(a.overflow - b.overflow);
}

double l1_null_expectation(const Histogram2& exact, std::uint64_t n) {
  const double k = std::sqrt(2.0 / (kPi * double(n)));
  auto term = [k](double p) { return p > 0.0 ? k * std::sqrt(p * (1.0 - std::min(p, 1.0))) : 0.0; };
  double e = term(exact.overflow);
  for (Eigen::Index i = 0; i < exact.mass.size(); ++i) e += term(exact.mass.data()[i]);
  return e;
}

}  // namespace lorentz
