// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>

#include "sketchlab/errors.hpp"

namespace sketchlab {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// Which consumer a stream belongs to. Distinct kinds never share keys.
enum class StreamKind : std::uint32_t {
  CountSketch = 1,  // block unused, lane = sketch column
  Gaussian = 2,     // Gaussian projection G*A: block = row chunk, lane = input row
  CountGauss = 3,   // G of G*S*A: block = row chunk, lane = sketch row
  Projection = 4,   // leverage-score JL matrix: block = row chunk, lane = column
  Data = 5,         // synthetic inputs: lane = matrix row
  Test = 15,
};

/// Rows of a Gaussian matrix are grouped in chunks of this many rows per stream.
inline constexpr std::int64_t kGaussianChunk = 64;

struct StreamKey {
  StreamKind kind = StreamKind::Test;
  std::uint32_t block = 0;
  std::uint64_t lane = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline Philox4x32::Key make_key(std::uint64_t seed, StreamKind kind) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(kind)));
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

inline Philox4x32::Counter make_counter(const StreamKey& key, std::uint32_t position) {
  return {position, key.block, static_cast<std::uint32_t>(key.lane), static_cast<std::uint32_t>(key.lane >> 32)};
}

/// Uniform on (0, 1] from 53 random bits.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

/// Box-Muller pair from one Philox block.
inline std::array<double, 2> box_muller(const Philox4x32::Counter& w) {
  const double u1 = open_unit(w[0], w[1]);
  const double u2 = open_unit(w[2], w[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace detail

/// Derives an independent master seed for a numbered sub-experiment (e.g. trial t).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::splitmix64(seed ^ detail::splitmix64(index + 0x5851F42D4C957F2Dull));
}

/// Master seed from SKETCHLAB_SEED, or `fallback` when unset or unparsable.
inline std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("SKETCHLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end != env && *end == '\0') return v;
  }
  return fallback;
}

/// Sequential stream for one (seed, key). The value sequence depends only on
/// (seed, key), never on which worker consumes it or when.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamKey key) : key_(key), philox_key_(detail::make_key(seed, key.kind)) {}

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Fair coin.
  bool randb() { return (next_u32() >> 31) != 0; }

  /// Unbiased integer in [0, r) (Lemire's multiply-and-reject).
  std::uint64_t randi(std::uint64_t r) {
    if (r == 0) throw InputError("randi: range must be >= 1");
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * r;
    auto low = static_cast<std::uint64_t>(m);
    if (low < r) {
      const std::uint64_t threshold = (0 - r) % r;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * r;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double randn() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    std::array<std::uint32_t, 4> w;
    for (auto& x : w) x = next_u32();
    const auto z = detail::box_muller(w);
    spare_ = z[1];
    has_spare_ = true;
    return z[0];
  }

 private:
  void refill() {
    buffer_ = Philox4x32::apply(detail::make_counter(key_, position_++), philox_key_);
    used_ = 0;
  }

  StreamKey key_;
  Philox4x32::Key philox_key_;
  std::uint32_t position_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Random-access view of a Gaussian matrix whose entry (i, j) is drawn from the
/// stream keyed by (kind, i / 64, j) at offset i % 64. Any worker can
/// materialize any entry or slice without coordination.
class GaussianField {
 public:
  GaussianField(std::uint64_t seed, StreamKind kind) : kind_(kind), key_(detail::make_key(seed, kind)) {}

  double operator()(std::int64_t i, std::int64_t j) const {
    const StreamKey sk{kind_, static_cast<std::uint32_t>(i / kGaussianChunk), static_cast<std::uint64_t>(j)};
    const auto offset = static_cast<std::uint32_t>(i % kGaussianChunk);
    const auto pair = detail::box_muller(Philox4x32::apply(detail::make_counter(sk, offset / 2), key_));
    return pair[offset % 2];
  }

  /// out[t] = G(row_begin + t, j) * scale for t in [0, row_end - row_begin).
  void fill_column(std::int64_t j, std::int64_t row_begin, std::int64_t row_end, double scale, double* out) const {
    std::int64_t i = row_begin;
    while (i < row_end) {
      const StreamKey sk{kind_, static_cast<std::uint32_t>(i / kGaussianChunk), static_cast<std::uint64_t>(j)};
      const auto offset = static_cast<std::uint32_t>(i % kGaussianChunk);
      const auto pair = detail::box_muller(Philox4x32::apply(detail::make_counter(sk, offset / 2), key_));
      if (offset % 2 == 0) {
        out[i - row_begin] = pair[0] * scale;
        ++i;
        if (i < row_end) {
          out[i - row_begin] = pair[1] * scale;
          ++i;
        }
      } else {
        out[i - row_begin] = pair[1] * scale;
        ++i;
      }
    }
  }

 private:
  StreamKind kind_;
  Philox4x32::Key key_;
};

}  // namespace sketchlab
