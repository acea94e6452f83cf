#include "circreg/error.hpp"

namespace circreg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidShape: return "invalid-shape";
    case ErrorKind::InvalidRegion: return "invalid-region";
    case ErrorKind::Internal: return "internal-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace circreg
