#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace asep {

/// Philox4x32-10 block function: maps a 128-bit counter and 64-bit key to
/// 128 pseudo-random bits. Stateless.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Sequential view of the counter-based stream (master_seed, stream_id).
/// Word number c of the stream is a pure function of (seed, stream, c), so
/// streams never share state and can be regenerated anywhere.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t master_seed, std::uint64_t stream_id)
      : seed_(master_seed), stream_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (slot_ == 2) refill();
    return buffer_[slot_++];
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate (> 0).
  double exponential(double rate);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t blocks() const { return counter_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int slot_ = 2;
};

/// Ring times of a Poisson clock with fixed rate, each ring carrying an
/// auxiliary uniform. Identical (seed, stream_id, rate) reproduce identical
/// rings bit-for-bit.
class ClockStream {
 public:
  ClockStream(std::uint64_t master_seed, std::uint64_t stream_id, double rate);

  double time() const { return time_; }
  double u() const { return u_; }
  std::uint64_t stream_id() const { return rng_.stream(); }
  /// Index of the current ring (0-based).
  std::uint64_t sequence() const { return sequence_; }
  double rate() const { return rate_; }

  /// Moves to the next ring.
  void advance();

 private:
  StreamRng rng_;
  double rate_;
  double time_ = 0.0;
  double u_ = 0.0;
  std::uint64_t sequence_ = 0;
};

/// SplitMix64 finaliser, used to derive stream ids from structured keys.
std::uint64_t mix64(std::uint64_t x);

}  // namespace asep
