#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream coordinates, position), so results do not depend on which
// worker evaluates which path or in what order.

#include <array>
#include <cstdint>

namespace jumpcompare {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

//! Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Sequential reader over one stream: counter = (path lo, path hi, lane, block).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t path, std::uint32_t lane);

  //! Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  //! Standard normal (Box-Muller, both outputs used).
  double normal();
  //! Exponential with the given rate.
  double exponential(double rate);

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter base_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Reserved lanes; Brownian increments use the segment index as the lane.
inline constexpr std::uint32_t kJumpLane = 0xFFFFFFFFu;
inline constexpr std::uint32_t kSamplingLane = 0xFFFFFFFEu;

}  // namespace jumpcompare
