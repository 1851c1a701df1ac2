#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace hcs {

// Every random stream in the library is xoshiro256** seeded through
// SplitMix64, and normals come from our own Box-Muller transform, so a seed
// reproduces the same draws on any platform with an IEEE-754 libm (the
// std:: distributions are implementation-defined and are never used).

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Pure 64-bit mixing of a master seed with a sequence of coordinates.
// Used to derive per-cell / per-trial seeds independent of execution order.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> coords) noexcept;

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

// Standard-normal variates via Box-Muller; draws come in pairs and the second
// value of each pair is cached, so the stream is a pure function of the seed.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : rng_(seed) {}

  double next() noexcept;
  Xoshiro256& engine() noexcept { return rng_; }

 private:
  Xoshiro256 rng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hcs
