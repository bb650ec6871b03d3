#include "qkr/rational.hpp"

#include <cmath>

namespace qkr {

std::optional<Fraction> rational_approximation(double x, std::int64_t max_q, double tol) {
  if (!std::isfinite(x) || max_q < 1) return std::nullopt;
  // Convergents h_k / k_k of the continued fraction of x.
  long double h_prev = 1, h = std::floor(static_cast<long double>(x));
  long double k_prev = 0, k = 1;
  long double rest = static_cast<long double>(x) - h;
  for (int iter = 0; iter < 64; ++iter) {
    if (std::fabs(static_cast<long double>(x) - h / k) <= tol) {
      return Fraction{static_cast<std::int64_t>(h), static_cast<std::int64_t>(k)};
    }
    if (rest == 0) break;
    const long double inv = 1.0L / rest;
    const long double a = std::floor(inv);
    rest = inv - a;
    const long double h_next = a * h + h_prev;
    const long double k_next = a * k + k_prev;
    if (k_next > static_cast<long double>(max_q)) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace qkr
