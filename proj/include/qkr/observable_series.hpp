#pragma once

#include <cstddef>
#include <vector>

namespace qkr {

/// Per-kick time series. `times` is mandatory; each observable column is
/// either empty (not recorded) or exactly as long as `times`.
struct ObservableSeries {
  std::vector<int> times;
  std::vector<double> p_mean;
  std::vector<double> e_mean;
  std::vector<double> norm;

  std::size_t size() const { return times.size(); }

  /// Throws ValidationError if a column has the wrong length or times are not
  /// strictly increasing.
  void validate() const;
};

}  // namespace qkr
