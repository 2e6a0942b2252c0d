// SPDX-License-Identifier: Apache-2.0
#include "lorentz/io.hpp"

#include <cstdio>
#include <ostream>

namespace lorentz {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_survival_csv(std::ostream& os, const SurvivalCurve& c, bool with_analytic) {
  os << "t,phi,stderr,phi_analytic\n";
  for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
    os << fmt17(c.t_grid[i]) << ',' << fmt17(c.value[i]) << ',' << fmt17(c.stderr_[i]) << ','
       << (with_analytic ? fmt17(analytic_phi(c.t_grid[i])) : std::string("nan")) << '\n';
  }
}

void write_field_csv(std::ostream& os, const HomogeneousField& f) {
  os << "s,h,value\n";
  for (int i = 0; i < f.values.rows(); ++i)
    for (int j = 0; j < f.values.cols(); ++j)
      os << fmt17(f.grid.s_center(i)) << ',' << fmt17(f.grid.h_node(j)) << ','
         << fmt17(f.values(i, j)) << '\n';
}

nlohmann::json to_json(const CollisionPattern& p) {
  return {{"A", p.A},   {"B", p.B},     {"Q", p.Q},     {"Qp", p.Q_prime},
          {"Sigma", p.Sigma}, {"N", p.N}, {"k", p.k}, {"eps", p.eps}, {"alpha", p.alpha}};
}

nlohmann::json to_json(const MomentReport& m) {
  auto vec = [](const auto& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  return {{"moments", vec(m.mean)},
          {"stderr", vec(m.stderr_)},
          {"mean_v", vec(m.mean_v)},
          {"mass", m.mass},
          {"recollision_fraction", m.recollision_fraction}};
}

nlohmann::json to_json(const GallavottiReport& g) {
  nlohmann::json billiard = nlohmann::json::array();
  for (const auto& b : g.billiard) billiard.push_back(to_json(b));
  return {{"sigma", g.sigma},
          {"t", g.t},
          {"r_values", g.r_values},
          {"moments", {{"billiard", billiard}, {"lorentz", to_json(g.lorentz)}}},
          {"moment_names", {"x1", "x2", "x1^2", "x2^2"}}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace lorentz
