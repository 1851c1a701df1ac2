#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "hcs/quantizer.hpp"

namespace hcs {

enum class BoundKind { kProbability, kCount, kDistance };

std::string_view to_string(BoundKind kind) noexcept;

struct BoundReport {
  std::string name;
  std::map<std::string, double> inputs;
  double value = 0.0;
  BoundKind interpretation = BoundKind::kProbability;
};

// Expected sign-flip rate caused by a perturbation of norm sigma:
// g = sigma / (2 sqrt(|x|^2 + sigma^2)). Throws kDomainError for x_norm <= 0
// or sigma < 0.
double consistency_bound(double sigma, double x_norm);
// The looser sigma / (2 |x|).
double consistency_bound_loose(double sigma, double x_norm);

// Hoeffding tail exp(-2 m gamma^2). Throws kDomainError for gamma <= 0 or m = 0.
double consistency_tail(double gamma, std::size_t m);

// Bound on Pr(recovering interval q_star | x_i in interval quantize(x_i)), for
// q_star != quantize(x_i), both 1-based. The deviation is measured from
// arccos(x_i)/pi to the edge of the recovered interval facing x_i.
// Throws kInvalidCandidate when q_star equals the true interval or is out of
// range.
double theorem2_failure_bound(double x_i, const HcsQuantizer& quantizer, std::size_t q_star,
                              std::size_t m);

// Squared Bernoulli-domain margin from arccos(x_i)/pi to the nearest interior
// edge of its interval. Edges at x_inf/x_sup cannot be crossed by recovery
// and are ignored. Throws kDegeneratePosition when x_i sits on an edge.
double recovery_margin(double x_i, const HcsQuantizer& quantizer);

// ceil(ln(1/(2 eta)) / (2 delta)), at least 1. Throws kDomainError unless
// delta > 0 and eta in (0, 1).
std::size_t measurements_for_margin(double delta, double eta);

// Measurements so that x_i is recovered with probability above 1 - eta.
std::size_t corollary2_measurements(double x_i, const HcsQuantizer& quantizer, double eta);

// Whole-signal form: ceil(ln(n / (2 eta)) / (2 min_i delta_i)), at least 1.
std::size_t corollary2_signal_measurements(std::span<const double> x,
                                           const HcsQuantizer& quantizer, double eta);

// ceil( (4/eps^2) (K ln n + 2K ln(50/eps) + ln(2/mu)) ), at least 1.
std::size_t lemma4_measurements(std::size_t sparsity, std::size_t n, double epsilon, double mu);

// sigma / (2 |x|) + gamma + epsilon.
double theorem3_error_bound(double sigma, double x_norm, double gamma, double epsilon);

}  // namespace hcs
