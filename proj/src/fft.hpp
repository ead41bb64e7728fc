#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace hbw::detail {

// Real-to-complex DFT of a fixed length backed by FFTW. Plans are shared
// through a process-wide cache; execution uses the new-array interface and
// is safe from any thread.
class RealFft {
public:
  explicit RealFft(std::size_t length);

  std::size_t length() const { return length_; }

  // in: length(), out: length()/2 + 1 bins.
  void forward(std::span<double> in, std::span<std::complex<double>> out) const;

private:
  struct Plan;
  std::size_t length_;
  std::shared_ptr<const Plan> plan_;
};

}  // namespace hbw::detail
