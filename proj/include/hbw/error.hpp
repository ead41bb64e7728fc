#pragma once

#include <stdexcept>
#include <string>

namespace hbw {

enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  LengthMismatch,
  DegenerateAtom,
  BlockExhausted,
  BudgetInfeasible,
  EmptyBlock,
  Io,
  Format,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code drives the C API status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace hbw
