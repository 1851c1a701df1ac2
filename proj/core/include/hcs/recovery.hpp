#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"

namespace hcs {

// D_KL(P || Q) between Bernoulli distributions given by their Pr(-1) values,
// natural log, with 0 log(0/q) = 0 and p log(p/0) = +inf for p > 0.
double kl_divergence(double p_minus, double q_minus) noexcept;

// KL divergence on the extended reals, ordered so that comparisons stay
// strict when the estimate sits at 0 or 1. An infinite divergence is
// weighted by the coefficient of log(1/eps) it picks up as the estimate
// approaches the endpoint; finite divergences have weight 0 and always
// compare below infinite ones.
struct ExtendedDivergence {
  double infinite_weight = 0.0;
  double finite = 0.0;

  friend auto operator<=>(const ExtendedDivergence&, const ExtendedDivergence&) = default;
};

ExtendedDivergence extended_kl(double p_minus, double q_minus) noexcept;

// Zero-based argmin_j D_KL(P_j || Q) over every boundary, smallest j on ties.
std::size_t nearest_boundary(std::span<const double> p_boundaries, double q_minus);

// Same answer as nearest_boundary, found by walking downhill from the
// boundary closest to q_minus in linear distance. Relies on the divergence
// being unimodal in j.
std::size_t nearest_boundary_descent(std::span<const double> p_boundaries, double q_minus);

// True when divergences[beta] is strictly below its left neighbour and not
// above its right neighbour (missing neighbours count as larger).
bool is_neighbor_dominant(std::span<const ExtendedDivergence> divergences, std::size_t beta);

enum class SearchStrategy { kFullScan, kNeighborDescent };

struct RecoveryResult {
  QuantizedSignal q_star;
  // Number of boundary divergences evaluated; n*k for the full scan.
  std::size_t kl_evaluations = 0;
  std::chrono::nanoseconds elapsed{0};
};

// q*_i = 1 + argmin_j D_KL(P_j || Phat(x_i)).
RecoveryResult recover(const OneBitMeasurements& y, const MeasurementEnsemble& ensemble,
                       const HcsQuantizer& quantizer,
                       SearchStrategy strategy = SearchStrategy::kFullScan);

RecoveryResult recover_from_estimates(std::span<const BernoulliEstimate> estimates,
                                      const HcsQuantizer& quantizer,
                                      SearchStrategy strategy = SearchStrategy::kFullScan);

// sum_i |q_i - q*_i| / (n k). Throws kMismatchedQuantizer when the two were
// produced by different quantizers or have different lengths.
double quantized_error(const QuantizedSignal& q, const QuantizedSignal& q_star);

// Per-dimension bound on the reconstruction error in the signal domain:
// 0 when q_i = q*_i, else (|q_i - q*_i| - 1) * max_interval_width.
std::vector<double> err_h_bound(const QuantizedSignal& q, const QuantizedSignal& q_star,
                                const HcsQuantizer& quantizer);

}  // namespace hcs
