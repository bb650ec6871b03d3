#include "qkr/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qkr/errors.hpp"

namespace qkr {

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw ValidationError("polyfit: x and y differ in length");
  if (degree < 0 || x.size() <= static_cast<std::size_t>(degree)) {
    throw ValidationError("polyfit: not enough points for the requested degree");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  // Centre and scale the abscissa for conditioning, then map back.
  double lo = x[0], hi = x[0];
  for (double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double centre = 0.5 * (lo + hi);
  const double half = (hi > lo) ? 0.5 * (hi - lo) : 1.0;

  Eigen::MatrixXd vander(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (x[static_cast<std::size_t>(i)] - centre) / half;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      vander(i, d) = p;
      p *= s;
    }
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd scaled = vander.colPivHouseholderQr().solve(rhs);

  // Expand sum_d a_d ((x - c)/h)^d into powers of x.
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int d = 0; d <= degree; ++d) {
    // ((x - c)/h)^d = h^-d sum_k binom(d,k) x^k (-c)^(d-k)
    double binom = 1.0;
    for (int k = 0; k <= d; ++k) {
      coeffs[static_cast<std::size_t>(k)] +=
          scaled(d) * binom * std::pow(-centre, d - k) / std::pow(half, d);
      binom = binom * (d - k) / (k + 1);
    }
  }
  return coeffs;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const auto c = polyfit(x, y, 1);
  return {c[1], c[0]};
}

LinearFit linear_fit_window(std::span<const double> y, int first, int last) {
  if (first < 0 || last < first || static_cast<std::size_t>(last) >= y.size()) {
    throw ValidationError("linear_fit_window: window outside the series");
  }
  std::vector<double> t;
  for (int i = first; i <= last; ++i) t.push_back(i);
  return linear_fit(t, y.subspan(static_cast<std::size_t>(first), t.size()));
}

}  // namespace qkr
