#include "abelkit/errors.hpp"

namespace abelkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::blow_up: return "blow_up";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::internal_consistency: return "internal_consistency";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace abelkit
