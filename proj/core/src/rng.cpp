#include "hcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace hcs {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t c : coords) {
    state = h ^ (c + 0x632be59bd9b4e019ULL);
    h = splitmix64(state);
  }
  return h;
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t Xoshiro256::below(std::uint64_t bound) noexcept {
  // Reject the biased tail of the 64-bit range.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return r % bound;
}

double NormalStream::next() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng_.uniform();
  const double u2 = rng_.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace hcs
