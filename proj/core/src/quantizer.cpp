#include "hcs/quantizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hcs/error.hpp"

namespace hcs {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double bernoulli_of(double x) noexcept {
  return std::acos(std::clamp(x, -1.0, 1.0)) / std::numbers::pi;
}

double xlogx(double t) noexcept { return t > 0.0 ? t * std::log(t) : 0.0; }

double log_f_ratio(double p_minus, double delta) {
  if (!(delta > 0.0) || p_minus < -kBoundaryTolerance ||
      p_minus + delta > 1.0 + kBoundaryTolerance) {
    throw Error(ErrorCode::kDomainError,
                "f is defined for p >= 0, delta > 0, p + delta <= 1 (got p=" +
                    std::to_string(p_minus) + ", delta=" + std::to_string(delta) + ")");
  }
  const double p = std::max(p_minus, 0.0);
  const double upper = std::min(p + delta, 1.0);
  const double numerator = xlogx(p) + xlogx(1.0 - p);
  const double denominator = xlogx(upper) + xlogx(std::max(1.0 - upper, 0.0));
  return (numerator - denominator) / delta;
}

double f_ratio(double p_minus, double delta) { return std::exp(log_f_ratio(p_minus, delta)); }

double kl_crossover(double p_minus, double delta) {
  const double log_f = log_f_ratio(p_minus, delta);
  if (log_f > 0.0) {
    const double e = std::exp(-log_f);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(log_f));
}

HcsQuantizer::HcsQuantizer(const QuantizerConfig& config) : config_(config) {
  const auto [k, lo, hi] = config;
  if (k < 2) {
    throw Error(ErrorCode::kInvalidConfig, "quantizer needs k >= 2");
  }
  if (!(lo >= -1.0 && lo < hi && hi <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "quantizer range must satisfy -1 <= x_inf < x_sup <= 1 (got [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "])");
  }

  const double p_first = bernoulli_of(lo);
  const double p_last = bernoulli_of(hi);
  delta_ = (p_first - p_last) / static_cast<double>(k - 1);
  if (!(delta_ > 0.0)) {
    throw Error(ErrorCode::kNumericFailure, "Bernoulli-domain interval collapsed to zero");
  }

  p_.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double p = p_first - static_cast<double>(j) * delta_;
    if (p < -kBoundaryTolerance || p > 1.0 + kBoundaryTolerance) {
      throw Error(ErrorCode::kNumericFailure,
                  "Bernoulli boundary P_" + std::to_string(j) + " = " + std::to_string(p) +
                      " falls outside [0, 1]");
    }
    p_[j] = std::clamp(p, 0.0, 1.0);
  }

  // S_j is the signal-domain image of the KL tie point between P_j and
  // P_{j-1} = P_j + delta.
  s_.resize(k + 1);
  s_.front() = lo;
  s_.back() = hi;
  for (std::size_t j = 1; j < k; ++j) {
    s_[j] = std::cos(std::numbers::pi * kl_crossover(p_[j], delta_));
  }
  for (std::size_t j = 1; j <= k; ++j) {
    if (!(s_[j] > s_[j - 1])) {
      throw Error(ErrorCode::kNumericFailure,
                  "signal-domain boundaries are not strictly increasing at S_" +
                      std::to_string(j));
    }
  }

  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, k);
  h = fnv1a(h, std::bit_cast<std::uint64_t>(lo));
  h = fnv1a(h, std::bit_cast<std::uint64_t>(hi));
  id_ = h;
}

std::size_t quantize_value(double x, const HcsQuantizer& quantizer) {
  const auto s = quantizer.s_boundaries();
  if (!(x >= s.front() && x <= s.back())) {
    throw Error(ErrorCode::kOutOfRange, "value " + std::to_string(x) +
                                            " outside quantizer range [" +
                                            std::to_string(s.front()) + ", " +
                                            std::to_string(s.back()) + "]");
  }
  if (x == s.back()) return quantizer.k();
  // First boundary strictly greater than x is S_q.
  const auto it = std::upper_bound(s.begin(), s.end(), x);
  return static_cast<std::size_t>(it - s.begin());
}

QuantizedSignal quantize(std::span<const double> x, const HcsQuantizer& quantizer) {
  QuantizedSignal q{std::vector<std::size_t>(x.size()), quantizer.k(), quantizer.id()};
  for (std::size_t i = 0; i < x.size(); ++i) {
    try {
      q.indices[i] = quantize_value(x[i], quantizer);
    } catch (const Error& e) {
      throw Error(e.code(), "dimension " + std::to_string(i) + ": " + e.what());
    }
  }
  return q;
}

QuantizedSignal quantize(const Signal& x, const HcsQuantizer& quantizer) {
  return quantize(x.values(), quantizer);
}

std::pair<double, double> interval_bounds(const HcsQuantizer& quantizer, std::size_t q) {
  if (q < 1 || q > quantizer.k()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "interval index " + std::to_string(q) + " outside [1, " +
                    std::to_string(quantizer.k()) + "]");
  }
  const auto s = quantizer.s_boundaries();
  return {s[q - 1], s[q]};
}

double max_interval_width(const HcsQuantizer& quantizer) noexcept {
  const auto s = quantizer.s_boundaries();
  double widest = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) widest = std::max(widest, s[j] - s[j - 1]);
  return widest;
}

}  // namespace hcs
