#pragma once

#include <stdexcept>
#include <string>

namespace domegrip {

/// Raised when an input violates a physical or mathematical precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a file cannot be read, parsed, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace domegrip
