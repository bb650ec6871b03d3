#pragma once

#include <cstdint>
#include <optional>

namespace qkr {

struct Fraction {
  std::int64_t p;
  std::int64_t q;  // > 0, gcd(p, q) == 1
};

/// Best rational approximation of x from its continued-fraction convergents
/// with denominator <= max_q. Returns nullopt unless |x - p/q| <= tol.
std::optional<Fraction> rational_approximation(double x, std::int64_t max_q, double tol);

}  // namespace qkr
