#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mantrap {

enum class ErrorCode {
  // acquisition
  DiagonalChannel,
  OutOfRange,
  DuplicateChannel,
  IncompleteFrame,
  MalformedCycle,
  // calibration
  WindowViolation,
  InsufficientData,
  NonPositiveFactor,
  // preprocess / metrics
  EmptySegment,
  MissingCalibration,
  // regression
  DomainError,
  RankDeficient,
  NonConvergence,
  Separation,
  SingleClass,
  ModelMismatch,
  DegenerateGroup,
  ZeroVariance,
  // decision
  UnfittedModel,
  LengthMismatch,
  // simulator / io
  InvalidConfig,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors raised while fitting or testing a regression model.
bool is_fit_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mantrap
