#pragma once

// Counter-based random number generation (Philox4x32-10).
//
// Every stream is addressed by (seed, stream, counter); draws are a pure
// function of that address, so matrix entries and Monte Carlo tasks can be
// generated in any order, on any number of threads, with identical results.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace rmt {

namespace detail {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t splitmix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline void philox_mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

// One block of Philox4x32 with 10 rounds.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    philox_mulhilo(M0, ctr[0], hi0, lo0);
    philox_mulhilo(M1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

}  // namespace detail

/// Derives an independent 64-bit sub-seed, e.g. one per Monte Carlo task.
inline uint64_t substream_seed(uint64_t seed, uint64_t index) {
  return detail::splitmix64(seed ^ detail::splitmix64(index + 1));
}

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        stream_lo_(static_cast<uint32_t>(stream)),
        stream_hi_(static_cast<uint32_t>(stream >> 32)) {}

  uint64_t next_u64() {
    if (buffered_ == 0) refill();
    --buffered_;
    const uint64_t v = buffer_[buffered_];
    return v;
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1); safe as a log/Box-Muller argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  /// Gamma(shape, scale=1), Marsaglia-Tsang; shape < 1 via the boost trick.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Chi distribution with (possibly fractional) dof k: sqrt of 2*Gamma(k/2).
  double chi(double dof) { return std::sqrt(2.0 * gamma(0.5 * dof)); }

 private:
  void refill() {
    const auto block = detail::philox4x32(
        {stream_lo_, stream_hi_, static_cast<uint32_t>(counter_),
         static_cast<uint32_t>(counter_ >> 32)},
        key_);
    ++counter_;
    buffer_[0] = (static_cast<uint64_t>(block[1]) << 32) | block[0];
    buffer_[1] = (static_cast<uint64_t>(block[3]) << 32) | block[2];
    buffered_ = 2;
  }

  std::array<uint32_t, 2> key_;
  uint32_t stream_lo_, stream_hi_;
  uint64_t counter_ = 0;
  std::array<uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace rmt
