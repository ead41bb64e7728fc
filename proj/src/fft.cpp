#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace hbw::detail {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Plan {
  fftw_plan handle = nullptr;

  explicit Plan(std::size_t n) {
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    handle = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                  reinterpret_cast<fftw_complex*>(out.data()),
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(handle);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

RealFft::RealFft(std::size_t length) : length_(length) {
  // Intentionally leaked: plans live for the whole process.
  static auto* cache = new std::map<std::size_t, std::shared_ptr<const Plan>>();
  std::lock_guard lock(planner_mutex());
  auto& slot = (*cache)[length];
  if (!slot) slot = std::make_shared<const Plan>(length);
  plan_ = slot;
}

void RealFft::forward(std::span<double> in, std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(plan_->handle, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace hbw::detail
