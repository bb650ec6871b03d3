#include "qkr/observable_series.hpp"

#include "qkr/errors.hpp"

namespace qkr {

void ObservableSeries::validate() const {
  const auto check = [&](const std::vector<double>& column, const char* name) {
    if (!column.empty() && column.size() != times.size()) {
      throw ValidationError(std::string("series column '") + name + "' has wrong length");
    }
  };
  check(p_mean, "p_mean");
  check(e_mean, "e_mean");
  check(norm, "norm");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) throw ValidationError("series times must be strictly increasing");
  }
}

}  // namespace qkr
