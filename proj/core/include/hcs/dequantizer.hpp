#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"

namespace hcs {

// Per-coordinate interval [low_i, high_i] implied by a quantized recovery.
struct BoxConstraint {
  std::vector<double> low;
  std::vector<double> high;

  std::size_t size() const noexcept { return low.size(); }
};

struct DequantizerConfig {
  std::size_t max_iterations = 100;
  // BIHT gradient step tau; nullopt means 1/m.
  std::optional<double> step_size;
  // Hard-thresholding level K; nullopt disables thresholding (dense signals).
  std::optional<std::size_t> sparsity;
  // Stop as soon as the Hamming error is at or below this value.
  double tolerance = 0.0;
};

// Throws kInvalidConfig for max_iterations = 0, a non-positive step,
// sparsity = 0 or a negative tolerance.
void validate(const DequantizerConfig& config);

struct DequantizedSignal {
  std::vector<double> values;  // unit l2 norm
  // Norm of the last iterate before the final normalization, so
  // values * prescale_norm recovers it.
  double prescale_norm = 1.0;
  std::size_t iterations_used = 0;
  // D_H(A(x_t), y) for the starting point followed by one entry per
  // iteration; empty for the midpoint rule.
  std::vector<double> hamming_error_trace;
};

// x*_i = (S_{q*_i - 1} + S_{q*_i}) / 2, then normalized.
// Throws kZeroVector when every midpoint is 0.
DequantizedSignal midpoint_dequantize(const QuantizedSignal& q_star,
                                      const HcsQuantizer& quantizer);

// Pre-normalization midpoints, exposed for inspection.
std::vector<double> interval_midpoints(const QuantizedSignal& q_star,
                                       const HcsQuantizer& quantizer);

BoxConstraint box_from_recovery(const QuantizedSignal& q_star, const HcsQuantizer& quantizer);

// z_i = median{low_i, x_i, high_i}.
std::vector<double> project_box(std::span<const double> x, const BoxConstraint& box);

// Keeps the K largest-magnitude entries (ties to the smaller index).
std::vector<double> hard_threshold(std::span<const double> x, std::size_t sparsity);

// Binary iterative hard thresholding:
//   x_{t+1} = H_K(x_t + (tau/2) Phi^T (y - sign(Phi x_t))),
// starting from Phi^T y / |Phi^T y|. With a box, each iterate is projected
// onto it after thresholding. The result is normalized once at the end.
DequantizedSignal biht(const OneBitMeasurements& y, const MeasurementEnsemble& ensemble,
                       const DequantizerConfig& config,
                       const std::optional<BoxConstraint>& box = std::nullopt);

// arccos(<x, x*>) / pi with the inner product clamped to [-1, 1].
double angular_error(std::span<const double> x, std::span<const double> x_star);

// Fraction of disagreeing positions. Throws kLengthMismatch.
double hamming_distance(const OneBitMeasurements& u, const OneBitMeasurements& v);

}  // namespace hcs
