#include "hcs/dequantizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hcs/error.hpp"

namespace hcs {

namespace {

double normalize_in_place(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  const double norm = std::sqrt(sum);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kZeroVector, "cannot normalize a zero vector");
  }
  for (double& x : v) x /= norm;
  return norm;
}

void check_recovery(const QuantizedSignal& q_star, const HcsQuantizer& quantizer) {
  if (q_star.quantizer_id != quantizer.id() || q_star.k != quantizer.k()) {
    throw Error(ErrorCode::kMismatchedQuantizer,
                "quantized recovery was not produced by this quantizer");
  }
}

std::size_t count_sign_disagreements(std::span<const double> projections,
                                     const OneBitMeasurements& y) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < projections.size(); ++j) {
    if (sign_bit(projections[j]) != y[j]) ++count;
  }
  return count;
}

}  // namespace

void validate(const DequantizerConfig& config) {
  if (config.max_iterations == 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_iterations must be >= 1");
  }
  if (config.step_size && !(*config.step_size > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "step_size must be > 0");
  }
  if (config.sparsity && *config.sparsity == 0) {
    throw Error(ErrorCode::kInvalidConfig, "sparsity must be >= 1");
  }
  if (!(config.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tolerance must be >= 0");
  }
}

std::vector<double> interval_midpoints(const QuantizedSignal& q_star,
                                       const HcsQuantizer& quantizer) {
  check_recovery(q_star, quantizer);
  std::vector<double> mid(q_star.size());
  for (std::size_t i = 0; i < q_star.size(); ++i) {
    const auto [low, high] = interval_bounds(quantizer, q_star.indices[i]);
    mid[i] = 0.5 * (low + high);
  }
  return mid;
}

DequantizedSignal midpoint_dequantize(const QuantizedSignal& q_star,
                                      const HcsQuantizer& quantizer) {
  DequantizedSignal out;
  out.values = interval_midpoints(q_star, quantizer);
  out.prescale_norm = normalize_in_place(out.values);
  return out;
}

BoxConstraint box_from_recovery(const QuantizedSignal& q_star, const HcsQuantizer& quantizer) {
  check_recovery(q_star, quantizer);
  BoxConstraint box{std::vector<double>(q_star.size()), std::vector<double>(q_star.size())};
  for (std::size_t i = 0; i < q_star.size(); ++i) {
    std::tie(box.low[i], box.high[i]) = interval_bounds(quantizer, q_star.indices[i]);
  }
  return box;
}

std::vector<double> project_box(std::span<const double> x, const BoxConstraint& box) {
  if (x.size() != box.low.size() || x.size() != box.high.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "box and vector lengths differ");
  }
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::clamp(x[i], box.low[i], box.high[i]);
  return z;
}

std::vector<double> hard_threshold(std::span<const double> x, std::size_t sparsity) {
  if (sparsity >= x.size()) return {x.begin(), x.end()};
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(sparsity),
                   order.end(), [&](std::size_t a, std::size_t b) {
                     const double ma = std::abs(x[a]);
                     const double mb = std::abs(x[b]);
                     return ma > mb || (ma == mb && a < b);
                   });
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t r = 0; r < sparsity; ++r) out[order[r]] = x[order[r]];
  return out;
}

DequantizedSignal biht(const OneBitMeasurements& y, const MeasurementEnsemble& ensemble,
                       const DequantizerConfig& config, const std::optional<BoxConstraint>& box) {
  validate(config);
  const std::size_t m = ensemble.rows();
  const std::size_t n = ensemble.cols();
  if (y.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measurement count " + std::to_string(y.size()) + " != ensemble m " +
                    std::to_string(m));
  }
  if (box && box->size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "box length differs from signal dimension");
  }
  const double tau = config.step_size.value_or(1.0 / static_cast<double>(m));
  const double inv_m = 1.0 / static_cast<double>(m);

  std::vector<double> y_real(y.bits().begin(), y.bits().end());
  std::vector<double> x = ensemble.back_project(y_real);
  normalize_in_place(x);
  auto constrain = [&](std::vector<double> v) {
    if (config.sparsity) v = hard_threshold(v, *config.sparsity);
    if (box) v = project_box(v, *box);
    return v;
  };
  x = constrain(std::move(x));

  DequantizedSignal out;
  std::vector<double> projections = ensemble.project(x);
  double hamming = static_cast<double>(count_sign_disagreements(projections, y)) * inv_m;
  out.hamming_error_trace.push_back(hamming);

  std::vector<double> residual(m);
  while (out.iterations_used < config.max_iterations && hamming > config.tolerance) {
    for (std::size_t j = 0; j < m; ++j) {
      residual[j] = static_cast<double>(y[j]) - static_cast<double>(sign_bit(projections[j]));
    }
    const std::vector<double> gradient = ensemble.back_project(residual);
    for (std::size_t i = 0; i < n; ++i) x[i] += 0.5 * tau * gradient[i];
    x = constrain(std::move(x));

    projections = ensemble.project(x);
    hamming = static_cast<double>(count_sign_disagreements(projections, y)) * inv_m;
    out.hamming_error_trace.push_back(hamming);
    ++out.iterations_used;
  }

  out.prescale_norm = normalize_in_place(x);
  out.values = std::move(x);
  return out;
}

double angular_error(std::span<const double> x, std::span<const double> x_star) {
  if (x.size() != x_star.size()) {
    throw Error(ErrorCode::kLengthMismatch, "vectors have different lengths");
  }
  const double inner = std::inner_product(x.begin(), x.end(), x_star.begin(), 0.0);
  return std::acos(std::clamp(inner, -1.0, 1.0)) / std::numbers::pi;
}

double hamming_distance(const OneBitMeasurements& u, const OneBitMeasurements& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "measurement vectors have different lengths (" + std::to_string(u.size()) +
                    " vs " + std::to_string(v.size()) + ")");
  }
  if (u.size() == 0) return 0.0;
  const auto a = u.negative_mask();
  const auto b = v.negative_mask();
  std::size_t differing = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    differing += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  }
  return static_cast<double>(differing) / static_cast<double>(u.size());
}

}  // namespace hcs
