#include "hcs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hcs/error.hpp"

namespace hcs {

namespace {

std::size_t ceil_count(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNumericFailure, "measurement count is not finite");
  }
  const double c = std::ceil(value);
  if (c < 1.0) return 1;
  if (c > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    throw Error(ErrorCode::kNumericFailure, "measurement count overflows");
  }
  return static_cast<std::size_t>(c);
}

void require_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::kDomainError, "eta must lie in (0, 1)");
  }
}

// arccos(S_j)/pi, the Bernoulli-domain position of signal boundary S_j.
double edge_probability(const HcsQuantizer& quantizer, std::size_t j) {
  return kl_crossover(quantizer.p_boundaries()[j], quantizer.delta());
}

}  // namespace

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::kProbability: return "probability";
    case BoundKind::kCount: return "count";
    case BoundKind::kDistance: return "distance";
  }
  return "unknown";
}

double consistency_bound(double sigma, double x_norm) {
  if (!(x_norm > 0.0) || !(sigma >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "consistency bound needs sigma >= 0 and |x| > 0");
  }
  if (std::isinf(sigma)) return 0.5;
  return 0.5 * sigma / std::hypot(x_norm, sigma);
}

double consistency_bound_loose(double sigma, double x_norm) {
  if (!(x_norm > 0.0) || !(sigma >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "consistency bound needs sigma >= 0 and |x| > 0");
  }
  return 0.5 * sigma / x_norm;
}

double consistency_tail(double gamma, std::size_t m) {
  if (!(gamma > 0.0) || m == 0) {
    throw Error(ErrorCode::kDomainError, "consistency tail needs gamma > 0 and m >= 1");
  }
  return std::exp(-2.0 * static_cast<double>(m) * gamma * gamma);
}

double theorem2_failure_bound(double x_i, const HcsQuantizer& quantizer, std::size_t q_star,
                              std::size_t m) {
  const std::size_t q = quantize_value(x_i, quantizer);
  if (q_star < 1 || q_star > quantizer.k()) {
    throw Error(ErrorCode::kInvalidCandidate,
                "candidate interval " + std::to_string(q_star) + " outside [1, " +
                    std::to_string(quantizer.k()) + "]");
  }
  if (q_star == q) {
    throw Error(ErrorCode::kInvalidCandidate,
                "candidate interval equals the true interval " + std::to_string(q));
  }
  const double p = bernoulli_of(x_i);
  // Recovered interval q* spans [S_{q*-1}, S_{q*}]. When x_i lies above it the
  // estimate must fall below arccos(S_{q*})/pi; below it, above
  // arccos(S_{q*-1})/pi.
  const double edge = q > q_star ? edge_probability(quantizer, q_star)
                                 : edge_probability(quantizer, q_star - 1);
  const double gap = edge - p;
  return 0.5 * std::exp(-2.0 * static_cast<double>(m) * gap * gap);
}

double recovery_margin(double x_i, const HcsQuantizer& quantizer) {
  const std::size_t q = quantize_value(x_i, quantizer);
  const double p = bernoulli_of(x_i);
  double margin = std::numeric_limits<double>::infinity();
  if (q > 1) {
    // Lower edge S_{q-1}; arccos is decreasing so its probability is larger.
    const double d = edge_probability(quantizer, q - 1) - p;
    margin = std::min(margin, d > 0.0 ? d * d : 0.0);
  }
  if (q < quantizer.k()) {
    const double d = p - edge_probability(quantizer, q);
    margin = std::min(margin, d > 0.0 ? d * d : 0.0);
  }
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::kDegeneratePosition,
                "x_i = " + std::to_string(x_i) + " lies on a quantizer boundary");
  }
  return margin;
}

std::size_t measurements_for_margin(double delta, double eta) {
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kDegeneratePosition, "margin must be positive");
  }
  require_eta(eta);
  return ceil_count(std::log(1.0 / (2.0 * eta)) / (2.0 * delta));
}

std::size_t corollary2_measurements(double x_i, const HcsQuantizer& quantizer, double eta) {
  require_eta(eta);
  return measurements_for_margin(recovery_margin(x_i, quantizer), eta);
}

std::size_t corollary2_signal_measurements(std::span<const double> x,
                                           const HcsQuantizer& quantizer, double eta) {
  require_eta(eta);
  if (x.empty()) {
    throw Error(ErrorCode::kInvalidDimension, "signal must be nonempty");
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    try {
      smallest = std::min(smallest, recovery_margin(x[i], quantizer));
    } catch (const Error& e) {
      throw Error(e.code(), "dimension " + std::to_string(i) + ": " + e.what());
    }
  }
  return ceil_count(std::log(static_cast<double>(x.size()) / (2.0 * eta)) / (2.0 * smallest));
}

std::size_t lemma4_measurements(std::size_t sparsity, std::size_t n, double epsilon, double mu) {
  if (n == 0 || !(epsilon > 0.0 && epsilon < 1.0) || !(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorCode::kDomainError, "embedding measurement count needs n >= 1 and epsilon, mu in (0, 1)");
  }
  const double k = static_cast<double>(sparsity);
  const double value = 4.0 / (epsilon * epsilon) *
                       (k * std::log(static_cast<double>(n)) + 2.0 * k * std::log(50.0 / epsilon) +
                        std::log(2.0 / mu));
  return ceil_count(value);
}

double theorem3_error_bound(double sigma, double x_norm, double gamma, double epsilon) {
  if (!(sigma >= 0.0) || !(gamma >= 0.0) || !(epsilon >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "error bound needs non-negative parameters");
  }
  return consistency_bound_loose(sigma, x_norm) + gamma + epsilon;
}

}  // namespace hcs
