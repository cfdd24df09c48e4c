#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prs {

enum class ErrorCode {
  NotPrimitive,
  UnsupportedWidth,
  DivisionByZero,
  GroupTooSmall,
  LengthMismatch,
  DuplicatePosition,
  WrongCount,
  PositionNotErased,
  ExhaustedPositions,
  InsufficientLiveNodes,
  OutOfRange,
  InvalidArgument,
  Format,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure is reported through this exception; the code is
// stable, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prs
