// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lorentz/freepath.hpp"
#include "lorentz/markov.hpp"
#include "lorentz/patterns.hpp"
#include "lorentz/poisson.hpp"

namespace lorentz {

/// 17 significant digits, enough to round-trip any double.
std::string fmt17(double x);

/// Header `t,phi,stderr,phi_analytic`.
void write_survival_csv(std::ostream& os, const SurvivalCurve& curve, bool with_analytic = true);

/// One `s,h,value` row per cell.
void write_field_csv(std::ostream& os, const HomogeneousField& field);

nlohmann::json to_json(const CollisionPattern& p);
nlohmann::json to_json(const MomentReport& m);
nlohmann::json to_json(const GallavottiReport& g);

/// Compact but stable JSON text (sorted keys, fixed indentation).
std::string dump_json(const nlohmann::json& j);

}  // namespace lorentz
