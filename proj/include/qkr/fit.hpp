#pragma once

#include <span>
#include <vector>

namespace qkr {

/// Least-squares polynomial fit; returns coefficients in ascending powers.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

struct LinearFit {
  double slope;
  double intercept;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Convenience: fit y[t] against t for t in [first, last] (inclusive indices).
LinearFit linear_fit_window(std::span<const double> y, int first, int last);

}  // namespace qkr
