// SPDX-License-Identifier: Apache-2.0
#include "lorentz/stats.hpp"
#include "lorentz/error.hpp"

#include <algorithm>
#include <cmath>

namespace lorentz {

double Moments::stderr_mean() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  return d;
}

double ks_critical(std::size_t n, double alpha) {
  // c(alpha) = sqrt(-ln(alpha/2)/2); 1.628 at 1%.
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(double(n));
}

}  // namespace lorentz

namespace lorentz {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::InsideObstacle: return "InsideObstacle";
    case ErrorCode::NotOnSurface: return "NotOnSurface";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::AlphaIsFarey: return "AlphaIsFarey";
    case ErrorCode::EpsTooLarge: return "EpsTooLarge";
    case ErrorCode::BranchGap: return "BranchGap";
    case ErrorCode::NoCollision: return "NoCollision";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace lorentz
