#include "hbw/error.hpp"

namespace hbw {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::LengthMismatch: return "length mismatch";
    case ErrorCode::DegenerateAtom: return "degenerate atom";
    case ErrorCode::BlockExhausted: return "block exhausted";
    case ErrorCode::BudgetInfeasible: return "budget infeasible";
    case ErrorCode::EmptyBlock: return "empty block";
    case ErrorCode::Io: return "i/o failure";
    case ErrorCode::Format: return "malformed file";
  }
  return "unknown error";
}

}  // namespace hbw
