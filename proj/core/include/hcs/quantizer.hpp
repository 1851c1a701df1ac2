#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hcs/measurement.hpp"

namespace hcs {

// Value of x in [-1, 1] mapped to Pr(s = -1) = arccos(x) / pi.
double bernoulli_of(double x) noexcept;

// t * log(t) with the convention 0 * log(0) = 0.
double xlogx(double t) noexcept;

// log f(p, delta), where
//   f = ( p^p (1-p)^(1-p) / ((p+delta)^(p+delta) (1-p-delta)^(1-p-delta)) )^(1/delta).
// Throws kDomainError unless p >= 0 and p + delta <= 1 (both within 1e-12).
double log_f_ratio(double p_minus, double delta);
double f_ratio(double p_minus, double delta);

// 1 / (1 + f(p, delta)): the estimate at which the KL divergences to the
// Bernoulli boundaries p and p + delta are equal.
double kl_crossover(double p_minus, double delta);

struct QuantizerConfig {
  std::size_t k = 2;
  double x_inf = -1.0;
  double x_sup = 1.0;
};

// k-bit quantizer: k uniformly spaced Bernoulli-domain boundaries
// P_j = arccos(x_inf)/pi - j*delta and their k+1 signal-domain images S_j.
class HcsQuantizer {
 public:
  // Throws kInvalidConfig for k < 2 or bounds outside -1 <= x_inf < x_sup <= 1,
  // kNumericFailure if the constructed boundaries are not well-formed.
  explicit HcsQuantizer(const QuantizerConfig& config);

  const QuantizerConfig& config() const noexcept { return config_; }
  std::size_t k() const noexcept { return config_.k; }
  double delta() const noexcept { return delta_; }

  // P_0 .. P_{k-1}, strictly decreasing.
  std::span<const double> p_boundaries() const noexcept { return p_; }
  // S_0 .. S_k, strictly increasing, S_0 = x_inf, S_k = x_sup.
  std::span<const double> s_boundaries() const noexcept { return s_; }

  // Stable identifier derived from (k, x_inf, x_sup).
  std::uint64_t id() const noexcept { return id_; }

 private:
  QuantizerConfig config_;
  double delta_;
  std::vector<double> p_;
  std::vector<double> s_;
  std::uint64_t id_;
};

inline HcsQuantizer build_quantizer(const QuantizerConfig& config) {
  return HcsQuantizer(config);
}

// Interval indices in 1..k, tagged with the quantizer that produced them.
struct QuantizedSignal {
  std::vector<std::size_t> indices;
  std::size_t k = 0;
  std::uint64_t quantizer_id = 0;

  std::size_t size() const noexcept { return indices.size(); }
  friend bool operator==(const QuantizedSignal&, const QuantizedSignal&) = default;
};

// Index q in 1..k with S_{q-1} <= x < S_q; x = S_k maps to k.
// Throws kOutOfRange outside [x_inf, x_sup].
std::size_t quantize_value(double x, const HcsQuantizer& quantizer);
// Throws kOutOfRange naming the first offending dimension.
QuantizedSignal quantize(std::span<const double> x, const HcsQuantizer& quantizer);
QuantizedSignal quantize(const Signal& x, const HcsQuantizer& quantizer);

// (S_{q-1}, S_q) for q in 1..k; throws kIndexOutOfRange otherwise.
std::pair<double, double> interval_bounds(const HcsQuantizer& quantizer, std::size_t q);

// Largest gap between neighboring signal-domain boundaries.
double max_interval_width(const HcsQuantizer& quantizer) noexcept;

}  // namespace hcs
