#pragma once

#include <cstdint>

namespace mva {

// PCG64 (XSL-RR 128/64) with explicit (seed, stream) seeding so every
// consumer can state exactly which substream it draws from. Seeding
// follows the reference construction:
//
//   state = 0; inc = (stream << 1) | 1;
//   state = state * MULT + inc;           // step
//   state += seed;
//   state = state * MULT + inc;           // step
//
// with MULT = 0x2360ed051fc65da4'4385df649fccf645. Each next() first steps
// state and then emits rotr64(hi64 ^ lo64, state >> 122). Distinct streams
// yield independent sequences for the same seed; the engine derives all of
// its randomness from (master seed, documented stream id) pairs.
class Pcg64 {
 public:
  Pcg64(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0;
    inc_ = ((static_cast<u128>(stream) << 1) | 1u);
    step();
    state_ += seed;
    step();
  }

  std::uint64_t next() {
    step();
    std::uint64_t xored = static_cast<std::uint64_t>(state_ >> 64) ^
                          static_cast<std::uint64_t>(state_);
    unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // Uniform on the open interval (0, 1): 53 random bits centered in the
  // half-open cells, so 0 and 1 are unreachable and the inverse normal
  // transform below is always finite.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  double normal();  // inverse_normal_cdf(uniform())

 private:
  using u128 = unsigned __int128;
  void step() { state_ = state_ * kMult + inc_; }

  static constexpr u128 kMult =
      (static_cast<u128>(0x2360ed051fc65da4ull) << 64) | 0x4385df649fccf645ull;
  u128 state_;
  u128 inc_;
};

// Stream ids for the engine's named substreams. Path-level simulation uses
// the path index itself as the stream, offset away from these constants.
inline constexpr std::uint64_t kPortfolioStream = 0x706f7274ull;  // "port"
inline constexpr std::uint64_t kShockStream = 0x7368636bull;      // "shck"

// Inverse of the standard normal CDF (Wichura's PPND16 rational
// approximations), accurate to ~1e-15 over p in (0, 1). Throws
// std::domain_error outside the open interval.
double inverse_normal_cdf(double p);

inline double Pcg64::normal() { return inverse_normal_cdf(uniform()); }

}  // namespace mva
