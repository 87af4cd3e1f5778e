#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace inhomo::detail {
namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanRegistry {
 public:
  static PlanRegistry& instance() {
    static PlanRegistry registry;
    return registry;
  }

  // Plans are never destroyed; the registry lives for the whole process.
  const Plans& get(const TorusGrid& grid) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(grid.dim(), grid.points());
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    int dims[3] = {grid.points(), grid.points(), grid.points()};
    AlignedVector<double> real(grid.physical_size());
    AlignedVector<Complex> spec(grid.spectral_size());
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    Plans p;
    p.forward = fftw_plan_dft_r2c(grid.dim(), dims, real.data(), cplx, FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r(grid.dim(), dims, cplx, real.data(), FFTW_ESTIMATE);
    return plans_.emplace(key, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Plans> plans_;
};

}  // namespace

void fft_forward(const TorusGrid& grid, const double* in, Complex* out) {
  const Plans& p = PlanRegistry::instance().get(grid);
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void fft_inverse(const TorusGrid& grid, Complex* in, double* out) {
  const Plans& p = PlanRegistry::instance().get(grid);
  fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace inhomo::detail
