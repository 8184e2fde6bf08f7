#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ghost::detail {

/// In-place batched complex FFT over one axis of a row-major array. Plans are
/// created with FFTW_ESTIMATE | FFTW_UNALIGNED so any buffer of the planned
/// shape may be transformed. Unnormalized in both directions.
class FftPlan {
public:
  enum class Direction { forward, backward };

  FftPlan(std::span<std::complex<double>> buffer, int n, int howmany, int stride, int dist, Direction dir);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;

  void execute(std::span<std::complex<double>> buffer) const;

private:
  void* plan_ = nullptr;
};

/// Spectrum (n/2 + 1 bins) of a real signal zero-padded to length n.
std::vector<std::complex<double>> real_spectrum(std::span<const double> signal, std::size_t n);

/// Angular wavenumber of FFT bin `i` for n samples spaced by dz (standard ordering).
inline double fft_wavenumber(std::size_t i, std::size_t n, double dz) {
  const double k = (i <= n / 2) ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
  return 2.0 * 3.14159265358979323846 * k / (static_cast<double>(n) * dz);
}

}  // namespace ghost::detail
