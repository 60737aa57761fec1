#include "steinlab/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

#include "steinlab/errors.hpp"

namespace steinlab {

namespace detail {

void* fft_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fft_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {
// FFTW's planner is not reentrant; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

std::size_t good_fft_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) throw DomainError("FFT length must be positive");
  RealBuffer re(n);
  ComplexBuffer co(n / 2 + 1);
  auto* cp = reinterpret_cast<fftw_complex*>(co.data());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(), cp, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), cp, re.data(), FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->inverse) throw NumericError("FFTW planning failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(const RealBuffer& in, ComplexBuffer& out) const {
  if (in.size() < n_) throw DomainError("FFT input too short");
  out.resize(spectrum_size());
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(ComplexBuffer& in, RealBuffer& out) const {
  if (in.size() < spectrum_size()) throw DomainError("FFT spectrum too short");
  out.resize(n_);
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
}

}  // namespace steinlab
