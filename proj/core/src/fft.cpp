#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

#include "ghost/errors.hpp"

namespace ghost::detail {

namespace {
// The FFTW planner is not re-entrant; execution is.
std::mutex planner_mutex;
}  // namespace

FftPlan::FftPlan(std::span<std::complex<double>> buffer, int n, int howmany, int stride, int dist, Direction dir) {
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  std::lock_guard lock(planner_mutex);
  plan_ = fftw_plan_many_dft(1, &n, howmany, data, nullptr, stride, dist, data, nullptr, stride, dist, sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_) throw Error("FFTW could not create a plan");
}

FftPlan::~FftPlan() {
  if (plan_) {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

FftPlan::FftPlan(FftPlan&& other) noexcept : plan_(std::exchange(other.plan_, nullptr)) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
  std::swap(plan_, other.plan_);
  return *this;
}

void FftPlan::execute(std::span<std::complex<double>> buffer) const {
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_), data, data);
}

std::vector<std::complex<double>> real_spectrum(std::span<const double> signal, std::size_t n) {
  std::vector<double> in(n, 0.0);
  std::copy(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(std::min(n, signal.size())), in.begin());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace ghost::detail
