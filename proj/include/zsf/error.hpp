#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zsf {

enum class ErrorKind {
  parse,
  capacity,
  invalid_argument,
  invalid_subgroup,
  size_mismatch,
  empty_input,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_subgroup: return "invalid-subgroup";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::empty_input: return "empty-input";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` is stable and machine-readable;
/// `what()` is a one-line human reason.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& reason)
      : std::runtime_error(reason), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace zsf
