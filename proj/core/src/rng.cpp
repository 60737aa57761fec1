#include "steinlab/rng.hpp"

#include <vector>

#include "steinlab/errors.hpp"
#include "steinlab/normal.hpp"

namespace steinlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::bijection(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void PhiloxStream::fill_uniform(std::span<double> out, std::uint64_t first) const {
  if (out.empty()) return;
  if (first + out.size() < first) throw StreamExhausted("draw index overflows the stream");
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  std::uint64_t k = first;
  std::size_t i = 0;
  while (i < out.size()) {
    const std::uint64_t block = k >> 1;
    const Philox4x32::Counter ctr{
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const auto r = Philox4x32::bijection(ctr, key);
    const std::uint64_t words[2] = {
        (static_cast<std::uint64_t>(r[1]) << 32) | r[0],
        (static_cast<std::uint64_t>(r[3]) << 32) | r[2]};
    for (unsigned h = static_cast<unsigned>(k & 1); h < 2 && i < out.size(); ++h, ++k, ++i) {
      out[i] = to_open_unit(words[h]);
    }
  }
}

void PhiloxStream::fill_normal(std::span<double> out, std::uint64_t first) const {
  fill_uniform(out, first);
  for (double& x : out) x = inverse_normal_cdf(x);
}

}  // namespace steinlab
