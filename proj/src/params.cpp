#include "qkr/params.hpp"

#include <cmath>
#include <string>

#include "qkr/errors.hpp"

namespace qkr {

KickedRotorParams::KickedRotorParams(double K, double hbar) : K_(K), hbar_(hbar) {
  if (!std::isfinite(K) || K < 0.0) {
    throw ValidationError("kick strength K must be finite and >= 0, got " + std::to_string(K));
  }
  if (!std::isfinite(hbar) || hbar <= 0.0) {
    throw ValidationError("hbar must be finite and > 0, got " + std::to_string(hbar));
  }
}

}  // namespace qkr
