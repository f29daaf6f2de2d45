#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asymshap {

enum class ErrorCode {
  InvalidInput,
  CyclicConstraints,
  CapExceeded,
  UnsupportedStructure,
  DomainError,
  DisallowedCoalition,
  SingularConditioning,
  MCBudgetZero,
  MetricUndefined,
  RankDeficient,
  DegenerateDesign,
  DegenerateBlocks,
  AllTied,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported as an Error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace asymshap
