#include "hcs/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "hcs/error.hpp"
#include "hcs/rng.hpp"

namespace hcs {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

Signal::Signal(std::vector<double> values, std::optional<std::size_t> sparsity_hint)
    : values_(std::move(values)), sparsity_(sparsity_hint) {
  if (values_.empty()) {
    throw Error(ErrorCode::kInvalidDimension, "signal must have at least one entry");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kInvalidSignal,
                  "signal entry " + std::to_string(i) + " is not finite");
    }
  }
  const double norm = l2_norm(values_);
  if (std::abs(norm - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorCode::kInvalidSignal,
                "signal must have unit l2 norm, got " + std::to_string(norm));
  }
  if (sparsity_) {
    const auto nonzeros = static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
    if (nonzeros > *sparsity_) {
      throw Error(ErrorCode::kInvalidSignal,
                  "signal has " + std::to_string(nonzeros) +
                      " nonzeros, exceeding sparsity " + std::to_string(*sparsity_));
    }
  }
}

Signal Signal::normalized(std::vector<double> values,
                          std::optional<std::size_t> sparsity_hint) {
  const double norm = l2_norm(values);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kZeroVector, "cannot normalize a zero or non-finite vector");
  }
  for (double& v : values) v /= norm;
  return Signal(std::move(values), sparsity_hint);
}

OneBitMeasurements::OneBitMeasurements(std::vector<std::int8_t> bits)
    : bits_(std::move(bits)), negative_(words_for(bits_.size()), 0) {
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j] == -1) {
      negative_[j / 64] |= std::uint64_t{1} << (j % 64);
    } else if (bits_[j] != 1) {
      throw Error(ErrorCode::kInvalidMeasurement,
                  "measurement " + std::to_string(j) + " is not -1 or +1");
    }
  }
}

OneBitMeasurements OneBitMeasurements::prefix(std::size_t m) const {
  if (m == 0 || m > bits_.size()) {
    throw Error(ErrorCode::kInvalidDimension, "prefix length out of range");
  }
  return OneBitMeasurements({bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(m)});
}

MeasurementEnsemble::MeasurementEnsemble(std::size_t n, std::size_t m, std::uint64_t seed,
                                         std::vector<double> data)
    : n_(n),
      m_(m),
      seed_(seed),
      words_per_column_(words_for(m)),
      data_(std::move(data)),
      signs_(n * words_per_column_, 0) {
  for (std::size_t j = 0; j < m_; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    const std::size_t word = j / 64;
    const double* row_ptr = data_.data() + j * n_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_ptr[i] < 0.0) signs_[i * words_per_column_ + word] |= bit;
    }
  }
}

MeasurementEnsemble MeasurementEnsemble::generate(std::size_t n, std::size_t m,
                                                  std::uint64_t seed) {
  if (n == 0 || m == 0) {
    throw Error(ErrorCode::kInvalidDimension,
                "ensemble needs n >= 1 and m >= 1 (got n=" + std::to_string(n) +
                    ", m=" + std::to_string(m) + ")");
  }
  std::vector<double> data(n * m);
  NormalStream normals(seed);
  for (double& v : data) v = normals.next();
  return MeasurementEnsemble(n, m, seed, std::move(data));
}

MeasurementEnsemble MeasurementEnsemble::from_matrix(std::size_t n, std::size_t m,
                                                     std::vector<double> row_major) {
  if (n == 0 || m == 0) {
    throw Error(ErrorCode::kInvalidDimension, "ensemble needs n >= 1 and m >= 1");
  }
  if (row_major.size() != n * m) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix data does not have m*n entries");
  }
  return MeasurementEnsemble(n, m, 0, std::move(row_major));
}

std::vector<double> MeasurementEnsemble::project(std::span<const double> x) const {
  if (x.size() != n_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "signal length " + std::to_string(x.size()) + " != ensemble n " +
                    std::to_string(n_));
  }
  std::vector<double> out(m_);
  for (std::size_t j = 0; j < m_; ++j) {
    const double* r = data_.data() + j * n_;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += r[i] * x[i];
    out[j] = acc;
  }
  return out;
}

std::vector<double> MeasurementEnsemble::back_project(std::span<const double> r) const {
  if (r.size() != m_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "residual length " + std::to_string(r.size()) + " != ensemble m " +
                    std::to_string(m_));
  }
  std::vector<double> out(n_, 0.0);
  for (std::size_t j = 0; j < m_; ++j) {
    const double w = r[j];
    if (w == 0.0) continue;
    const double* row_ptr = data_.data() + j * n_;
    for (std::size_t i = 0; i < n_; ++i) out[i] += w * row_ptr[i];
  }
  return out;
}

OneBitMeasurements measure(const MeasurementEnsemble& ensemble, std::span<const double> x) {
  const std::vector<double> projections = ensemble.project(x);
  std::vector<std::int8_t> bits(projections.size());
  std::transform(projections.begin(), projections.end(), bits.begin(), sign_bit);
  return OneBitMeasurements(std::move(bits));
}

OneBitMeasurements measure(const MeasurementEnsemble& ensemble, const Signal& x) {
  return measure(ensemble, x.values());
}

namespace {

void check_measurement_count(const OneBitMeasurements& y,
                             const MeasurementEnsemble& ensemble) {
  if (y.size() != ensemble.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "measurement count " + std::to_string(y.size()) + " != ensemble m " +
                    std::to_string(ensemble.rows()));
  }
}

// y_j * sign(Phi_ji) = -1 exactly when one of the two is negative, so the
// count is the popcount of the XOR of the two negative masks.
std::size_t count_disagreements(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b) {
  std::size_t count = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    count += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  }
  return count;
}

}  // namespace

BernoulliEstimate estimate_bernoulli(const OneBitMeasurements& y,
                                     const MeasurementEnsemble& ensemble, std::size_t i) {
  check_measurement_count(y, ensemble);
  if (i >= ensemble.cols()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "dimension index " + std::to_string(i) + " outside [0, " +
                    std::to_string(ensemble.cols()) + ")");
  }
  return {count_disagreements(y.negative_mask(), ensemble.column_negative_mask(i)),
          ensemble.rows()};
}

std::vector<BernoulliEstimate> estimate_all(const OneBitMeasurements& y,
                                            const MeasurementEnsemble& ensemble) {
  check_measurement_count(y, ensemble);
  std::vector<BernoulliEstimate> out(ensemble.cols());
  const auto y_mask = y.negative_mask();
  for (std::size_t i = 0; i < ensemble.cols(); ++i) {
    out[i] = {count_disagreements(y_mask, ensemble.column_negative_mask(i)),
              ensemble.rows()};
  }
  return out;
}

}  // namespace hcs
