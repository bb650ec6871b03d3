#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkr {

/// Raised when an input violates a precondition (bad grid size, beta out of
/// the Brillouin zone, non-resonant hbar passed to a resonance routine...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical guard trips during evolution, e.g. the norm drifts
/// beyond its tolerance.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects non-fatal warnings (aliasing, subpacket overlap).
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

}  // namespace qkr
