// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz {

enum class ErrorCode {
  InvalidRadius,
  InsideObstacle,
  NotOnSurface,
  DomainError,
  PrecisionExhausted,
  AlphaIsFarey,
  EpsTooLarge,
  BranchGap,
  NoCollision,
  CflViolation,
  UsageError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; every library error is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lorentz
