#include "hcs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "hcs/error.hpp"

namespace hcs {

namespace {

// p * log(p / q) split into (infinite weight, finite part).
ExtendedDivergence relative_term(double p, double q) noexcept {
  if (p <= 0.0) return {};
  if (q <= 0.0) return {p, 0.0};
  return {0.0, p * (std::log(p) - std::log(q))};
}

struct Scan {
  std::size_t index;
  std::size_t evaluations;
};

Scan full_scan(std::span<const double> p, double q_minus) {
  std::size_t best = 0;
  ExtendedDivergence best_div = extended_kl(p[0], q_minus);
  for (std::size_t j = 1; j < p.size(); ++j) {
    const ExtendedDivergence d = extended_kl(p[j], q_minus);
    if (d < best_div) {
      best = j;
      best_div = d;
    }
  }
  return {best, p.size()};
}

Scan descent(std::span<const double> p, double q_minus) {
  const std::size_t k = p.size();
  const double step = (p.front() - p.back()) / static_cast<double>(k - 1);
  const double guess = std::round((p.front() - q_minus) / step);
  std::size_t j = static_cast<std::size_t>(std::clamp(guess, 0.0, static_cast<double>(k - 1)));

  std::size_t evaluations = 1;
  ExtendedDivergence current = extended_kl(p[j], q_minus);
  // Walk left while not worse (ties go to the smaller index), then right
  // while strictly better.
  while (j > 0) {
    const ExtendedDivergence left = extended_kl(p[j - 1], q_minus);
    ++evaluations;
    if (left <= current) {
      --j;
      current = left;
    } else {
      break;
    }
  }
  while (j + 1 < k) {
    const ExtendedDivergence right = extended_kl(p[j + 1], q_minus);
    ++evaluations;
    if (right < current) {
      ++j;
      current = right;
    } else {
      break;
    }
  }
  return {j, evaluations};
}

}  // namespace

double kl_divergence(double p_minus, double q_minus) noexcept {
  const ExtendedDivergence d = extended_kl(p_minus, q_minus);
  if (d.infinite_weight > 0.0) return std::numeric_limits<double>::infinity();
  return std::max(d.finite, 0.0);
}

ExtendedDivergence extended_kl(double p_minus, double q_minus) noexcept {
  const ExtendedDivergence neg = relative_term(p_minus, q_minus);
  const ExtendedDivergence pos = relative_term(1.0 - p_minus, 1.0 - q_minus);
  return {neg.infinite_weight + pos.infinite_weight, neg.finite + pos.finite};
}

std::size_t nearest_boundary(std::span<const double> p_boundaries, double q_minus) {
  if (p_boundaries.empty()) {
    throw Error(ErrorCode::kInvalidDimension, "no boundaries to search");
  }
  return full_scan(p_boundaries, q_minus).index;
}

std::size_t nearest_boundary_descent(std::span<const double> p_boundaries, double q_minus) {
  if (p_boundaries.size() < 2) return nearest_boundary(p_boundaries, q_minus);
  return descent(p_boundaries, q_minus).index;
}

bool is_neighbor_dominant(std::span<const ExtendedDivergence> divergences, std::size_t beta) {
  if (beta >= divergences.size()) return false;
  const bool beats_left = beta == 0 || divergences[beta - 1] > divergences[beta];
  const bool beats_right =
      beta + 1 == divergences.size() || divergences[beta + 1] >= divergences[beta];
  return beats_left && beats_right;
}

RecoveryResult recover_from_estimates(std::span<const BernoulliEstimate> estimates,
                                      const HcsQuantizer& quantizer, SearchStrategy strategy) {
  const auto start = std::chrono::steady_clock::now();
  const auto p = quantizer.p_boundaries();
  RecoveryResult result;
  result.q_star = {std::vector<std::size_t>(estimates.size()), quantizer.k(), quantizer.id()};
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double q_minus = estimates[i].p_minus();
    const Scan scan = strategy == SearchStrategy::kFullScan || p.size() < 2
                          ? full_scan(p, q_minus)
                          : descent(p, q_minus);
    result.q_star.indices[i] = scan.index + 1;
    result.kl_evaluations += scan.evaluations;
  }
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

RecoveryResult recover(const OneBitMeasurements& y, const MeasurementEnsemble& ensemble,
                       const HcsQuantizer& quantizer, SearchStrategy strategy) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<BernoulliEstimate> estimates = estimate_all(y, ensemble);
  RecoveryResult result = recover_from_estimates(estimates, quantizer, strategy);
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

namespace {

void check_comparable(const QuantizedSignal& q, const QuantizedSignal& q_star) {
  if (q.quantizer_id != q_star.quantizer_id || q.k != q_star.k) {
    throw Error(ErrorCode::kMismatchedQuantizer,
                "quantized signals come from different quantizers");
  }
  if (q.size() != q_star.size()) {
    throw Error(ErrorCode::kMismatchedQuantizer,
                "quantized signals have different lengths (" + std::to_string(q.size()) +
                    " vs " + std::to_string(q_star.size()) + ")");
  }
}

std::size_t index_gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

double quantized_error(const QuantizedSignal& q, const QuantizedSignal& q_star) {
  check_comparable(q, q_star);
  if (q.size() == 0 || q.k == 0) return 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < q.size(); ++i) total += index_gap(q.indices[i], q_star.indices[i]);
  return static_cast<double>(total) / (static_cast<double>(q.size()) * static_cast<double>(q.k));
}

std::vector<double> err_h_bound(const QuantizedSignal& q, const QuantizedSignal& q_star,
                                const HcsQuantizer& quantizer) {
  check_comparable(q, q_star);
  if (q.quantizer_id != quantizer.id()) {
    throw Error(ErrorCode::kMismatchedQuantizer, "quantizer does not match the signals");
  }
  const double widest = max_interval_width(quantizer);
  std::vector<double> bound(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const std::size_t gap = index_gap(q.indices[i], q_star.indices[i]);
    if (gap > 1) bound[i] = static_cast<double>(gap - 1) * widest;
  }
  return bound;
}

}  // namespace hcs
