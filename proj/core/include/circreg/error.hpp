#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circreg {

enum class ErrorKind {
  InvalidParameter,
  TooLarge,
  Unsupported,
  Precondition,
  InsufficientData,
  InvalidShape,
  InvalidRegion,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. The kind is stable
// and is what callers (and the CLI exit code mapping) should switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace circreg
