#pragma once

#include <stdexcept>
#include <string>

namespace oca {

// Raised when an operation's domain precondition does not hold (e.g. a
// non-bipermutive rule handed to an OCA routine).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace oca
