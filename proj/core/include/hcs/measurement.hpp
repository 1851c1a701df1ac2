#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hcs {

inline constexpr double kUnitNormTolerance = 1e-9;

// A real signal on the unit l2 sphere, optionally tagged with a sparsity K.
class Signal {
 public:
  // Throws kInvalidSignal unless |values|_2 = 1 within kUnitNormTolerance and
  // the nonzero count respects the hint.
  explicit Signal(std::vector<double> values,
                  std::optional<std::size_t> sparsity_hint = std::nullopt);

  // Scales `values` to unit norm first; throws kZeroVector for a zero input.
  static Signal normalized(std::vector<double> values,
                           std::optional<std::size_t> sparsity_hint = std::nullopt);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::optional<std::size_t> sparsity_hint() const noexcept { return sparsity_; }

 private:
  std::vector<double> values_;
  std::optional<std::size_t> sparsity_;
};

// Sign measurements y in {-1, +1}^m.
class OneBitMeasurements {
 public:
  explicit OneBitMeasurements(std::vector<std::int8_t> bits);

  std::size_t size() const noexcept { return bits_.size(); }
  std::span<const std::int8_t> bits() const noexcept { return bits_; }
  std::int8_t operator[](std::size_t j) const noexcept { return bits_[j]; }

  // Bit j of word j/64 is set iff y_j = -1. Padding bits are zero.
  std::span<const std::uint64_t> negative_mask() const noexcept { return negative_; }

  // The first `m` measurements (rows are generated in order, so this equals
  // measuring with a smaller ensemble from the same seed).
  OneBitMeasurements prefix(std::size_t m) const;

  friend bool operator==(const OneBitMeasurements& a, const OneBitMeasurements& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<std::int8_t> bits_;
  std::vector<std::uint64_t> negative_;
};

// Empirical Pr(s_i = -1) from m sign-agreement trials.
struct BernoulliEstimate {
  std::size_t negative_count = 0;
  std::size_t sample_count = 0;

  double p_minus() const noexcept {
    return static_cast<double>(negative_count) / static_cast<double>(sample_count);
  }
  double p_plus() const noexcept { return 1.0 - p_minus(); }
};

// m x n i.i.d. standard-normal projection matrix, stored row-major, plus a
// column-major bitmask of its negative entries.
class MeasurementEnsemble {
 public:
  // Throws kInvalidDimension for n = 0 or m = 0. Entries are drawn in
  // row-major order from NormalStream(seed).
  static MeasurementEnsemble generate(std::size_t n, std::size_t m, std::uint64_t seed);

  // Wraps an explicit row-major matrix (used for crafted inputs).
  static MeasurementEnsemble from_matrix(std::size_t n, std::size_t m,
                                         std::vector<double> row_major);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const double> matrix() const noexcept { return data_; }
  std::span<const double> row(std::size_t j) const noexcept {
    return {data_.data() + j * n_, n_};
  }
  double at(std::size_t j, std::size_t i) const noexcept { return data_[j * n_ + i]; }

  // Negative-sign mask of column i; bit j set iff Phi(j, i) < 0.
  std::span<const std::uint64_t> column_negative_mask(std::size_t i) const noexcept {
    return {signs_.data() + i * words_per_column_, words_per_column_};
  }

  // Phi * x and Phi^T * r.
  std::vector<double> project(std::span<const double> x) const;
  std::vector<double> back_project(std::span<const double> r) const;

 private:
  MeasurementEnsemble(std::size_t n, std::size_t m, std::uint64_t seed,
                      std::vector<double> data);

  std::size_t n_;
  std::size_t m_;
  std::uint64_t seed_;
  std::size_t words_per_column_;
  std::vector<double> data_;
  std::vector<std::uint64_t> signs_;
};

// sign with the tie rule sign(0) = +1.
constexpr std::int8_t sign_bit(double v) noexcept { return v < 0.0 ? -1 : 1; }

// y = sign(Phi x). Throws kDimensionMismatch when ensemble.cols() != x.size().
OneBitMeasurements measure(const MeasurementEnsemble& ensemble, std::span<const double> x);
OneBitMeasurements measure(const MeasurementEnsemble& ensemble, const Signal& x);

// Zero-based dimension index i. Throws kIndexOutOfRange for i >= n and
// kDimensionMismatch when y and the ensemble disagree on m.
BernoulliEstimate estimate_bernoulli(const OneBitMeasurements& y,
                                     const MeasurementEnsemble& ensemble, std::size_t i);

std::vector<BernoulliEstimate> estimate_all(const OneBitMeasurements& y,
                                            const MeasurementEnsemble& ensemble);

}  // namespace hcs
