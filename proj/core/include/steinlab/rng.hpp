#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace steinlab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is addressed by (master_seed, stream_id): the seed is the
/// 64-bit key, the stream id fills the upper 64 bits of the 128-bit
/// counter and the draw block index the lower 64 bits.  The map
/// (seed, stream, block) -> (key, counter) is a bijection, so distinct
/// (seed, stream) pairs never share a block.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter bijection(Counter ctr, Key key);
};

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : seed_(master_seed), stream_(stream_id) {}

  /// Uniforms in the open interval (0, 1); draw k uses 64 bits of block
  /// k / 2.  Draws are addressed absolutely, so filling [first, first+n)
  /// gives the same values however the request is split.
  void fill_uniform(std::span<double> out, std::uint64_t first = 0) const;

  /// Standard normals by inverse-CDF transform of fill_uniform.
  void fill_normal(std::span<double> out, std::uint64_t first = 0) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace steinlab
