#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdlseg {

enum class ErrorCode {
  SelfLoop,
  EmptySequence,
  OutOfBounds,
  UnassignedNode,
  DomainError,
  InvalidSegmentation,
  DegenerateSnapshot,
  UnknownSetting,
  InvalidSpec,
  EmptyDomain,
  SegmentMismatch,
  ParseError,
  IoError,
  BadConfig,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mdlseg
