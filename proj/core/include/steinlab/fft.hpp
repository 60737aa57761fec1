#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <new>
#include <vector>

namespace steinlab {

namespace detail {
void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;
}  // namespace detail

/// Allocator giving the SIMD alignment FFTW plans are made with.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_alloc();
    return static_cast<T*>(detail::fft_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_free(p); }

  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, FftAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, FftAllocator<std::complex<double>>>;

/// Smallest 7-smooth integer >= n.
std::size_t good_fft_size(std::size_t n);

/// Out-of-place real <-> half-complex transform of fixed length.
/// Unnormalized in both directions, as FFTW.  Plans are created once and
/// executed on caller buffers, so one RealFft may be shared by threads that
/// each own their buffers.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  /// in: size() reals (preserved); out: spectrum_size() complex.
  void forward(const RealBuffer& in, ComplexBuffer& out) const;
  /// in: spectrum_size() complex (clobbered); out: size() reals.
  void inverse(ComplexBuffer& in, RealBuffer& out) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace steinlab
