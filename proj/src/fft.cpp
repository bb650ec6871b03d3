#include "qkr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace qkr::fft {
namespace {

// FFTW planning is not thread-safe but fftw_execute_dft is, so plans are built
// once per size under a lock and then shared. FFTW_ESTIMATE keeps the chosen
// algorithm (and therefore the output bits) independent of timing.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.backward);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair plans{fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, flags),
                   fftw_plan_dft_1d(size, buf, buf, FFTW_BACKWARD, flags)};
    return plans_.emplace(n, plans).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(fftw_plan plan, std::span<std::complex<double>> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(std::span<std::complex<double>> data) {
  execute(cache().get(data.size()).forward, data);
}

void backward(std::span<std::complex<double>> data) {
  execute(cache().get(data.size()).backward, data);
}

}  // namespace qkr::fft
