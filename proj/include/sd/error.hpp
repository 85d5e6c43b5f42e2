#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sd {

/// Thrown when an argument violates a documented precondition.
class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class NumericErrorKind {
  pole,        // Gamma at a nonpositive integer, local factor with p^s == r
  divergent,   // local series or tail integral does not converge
  domain,      // zeta off Re s > 1, branch cut of cpow/clog1p
  degenerate,  // lambda0(alpha) == 0, zero normalising sum
};

inline const char* to_string(NumericErrorKind kind) {
  switch (kind) {
    case NumericErrorKind::pole: return "pole";
    case NumericErrorKind::divergent: return "divergent";
    case NumericErrorKind::domain: return "domain";
    case NumericErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

/// Numeric failure. `prime` carries the offending prime when one exists.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(NumericErrorKind kind, const std::string& what,
                std::uint64_t prime = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        prime_(prime) {}

  NumericErrorKind kind() const noexcept { return kind_; }
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  NumericErrorKind kind_;
  std::uint64_t prime_;
};

}  // namespace sd
