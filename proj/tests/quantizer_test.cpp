#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hcs/error.hpp"
#include "hcs/quantizer.hpp"
#include "hcs/rng.hpp"

namespace {

using hcs::ErrorCode;
using hcs::HcsQuantizer;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const hcs::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected hcs::Error";
  return ErrorCode::kIoError;
}

HcsQuantizer unit(std::size_t k) { return HcsQuantizer({k, -1.0, 1.0}); }

HcsQuantizer random_quantizer(hcs::Xoshiro256& rng) {
  const std::size_t k = 2 + rng.below(60);
  double a = 2.0 * rng.uniform() - 1.0, b = 2.0 * rng.uniform() - 1.0;
  if (a > b) std::swap(a, b);
  if (b - a < 1e-3) b = std::min(1.0, a + 0.1);
  return HcsQuantizer({k, a, b});
}

TEST(FRatio, PinnedValues) {
  EXPECT_NEAR(hcs::f_ratio(0.4, 0.1), 1.2230590464, 1e-12);
  EXPECT_DOUBLE_EQ(hcs::f_ratio(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(hcs::kl_crossover(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(hcs::xlogx(0.0), 0.0);
}

TEST(FRatio, DomainErrors) {
  EXPECT_EQ(code_of([] { hcs::log_f_ratio(-0.1, 0.1); }), ErrorCode::kDomainError);
  EXPECT_EQ(code_of([] { hcs::log_f_ratio(0.95, 0.1); }), ErrorCode::kDomainError);
  EXPECT_EQ(code_of([] { hcs::log_f_ratio(0.5, 0.0); }), ErrorCode::kDomainError);
}

TEST(FRatio, SmallDeltaStaysFinite) {
  // The exponent is 1/delta; log-space evaluation keeps it finite.
  const double c = hcs::kl_crossover(0.3, 1e-9);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_NEAR(c, 0.3, 1e-6);
}

// Property: f decreases strictly in p on a grid.
TEST(FRatioProperty, StrictlyDecreasingInP) {
  for (double delta : {0.01, 0.05, 0.2, 0.5}) {
    double previous = hcs::f_ratio(0.0, delta);
    for (double p = 0.005; p + delta <= 1.0; p += 0.005) {
      const double f = hcs::f_ratio(p, delta);
      ASSERT_LT(f, previous) << "p=" << p << " delta=" << delta;
      previous = f;
    }
  }
}

// Property: the crossover p* balances both divergences, p < p* < p + delta.
TEST(FRatioProperty, CrossoverLiesBetweenBoundaries) {
  hcs::Xoshiro256 rng(9);
  for (int t = 0; t < 2000; ++t) {
    const double delta = 0.001 + 0.5 * rng.uniform();
    const double p = (1.0 - delta) * rng.uniform();
    const double c = hcs::kl_crossover(p, delta);
    ASSERT_GT(c, p);
    ASSERT_LT(c, p + delta);
  }
}

TEST(Quantizer, TwoLevelClosedForm) {
  const auto q = unit(2);
  EXPECT_DOUBLE_EQ(q.delta(), 1.0);
  const auto s = q.s_boundaries();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], -1.0);
  EXPECT_LE(std::abs(s[1]), 1e-12);
  EXPECT_EQ(s[2], 1.0);
}

TEST(Quantizer, ThreeLevelIsSymmetric) {
  const auto q = unit(3);
  const auto s = q.s_boundaries();
  EXPECT_EQ(s[0], -1.0);
  EXPECT_EQ(s[3], 1.0);
  EXPECT_NEAR(s[1], -0.80901699437494742, 1e-13);
  EXPECT_NEAR(s[2], 0.80901699437494742, 1e-13);
}

TEST(Quantizer, EightLevelPinnedBoundaries) {
  const double expected[] = {-1.0, -0.98584791058004066, -0.78763424046056403,
                             -0.43692245600955121, 0.0, 0.43692245600955121,
                             0.78763424046056403, 0.98584791058004066, 1.0};
  const auto q = unit(8);
  const auto s = q.s_boundaries();
  ASSERT_EQ(s.size(), 9u);
  for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(s[j], expected[j], 1e-13) << j;
}

TEST(Quantizer, InvalidConfigs) {
  EXPECT_EQ(code_of([] { HcsQuantizer({1, -1.0, 1.0}); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { HcsQuantizer({4, 0.5, 0.5}); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { HcsQuantizer({4, 0.5, -0.5}); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { HcsQuantizer({4, -1.5, 1.0}); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { HcsQuantizer({4, -1.0, NAN}); }), ErrorCode::kInvalidConfig);
}

TEST(Quantizer, IdDependsOnConfigOnly) {
  EXPECT_EQ(unit(8).id(), unit(8).id());
  EXPECT_NE(unit(8).id(), unit(9).id());
  EXPECT_NE(unit(8).id(), HcsQuantizer({8, -0.5, 1.0}).id());
}

TEST(Quantize, ValuesAndEdges) {
  const auto q = unit(2);
  EXPECT_EQ(hcs::quantize_value(-0.5, q), 1u);
  EXPECT_EQ(hcs::quantize_value(-1.0, q), 1u);
  EXPECT_EQ(hcs::quantize_value(1.0, q), 2u);
  EXPECT_EQ(hcs::quantize_value(0.5, q), 2u);
  EXPECT_EQ(code_of([&] { hcs::quantize_value(1.5, q); }), ErrorCode::kOutOfRange);
  const HcsQuantizer narrow({4, -0.5, 0.5});
  EXPECT_EQ(code_of([&] { hcs::quantize_value(-0.6, narrow); }), ErrorCode::kOutOfRange);
}

TEST(Quantize, ErrorNamesDimension) {
  const HcsQuantizer narrow({4, -0.5, 0.5});
  try {
    hcs::quantize(std::vector<double>{0.1, 0.2, 0.9}, narrow);
    FAIL();
  } catch (const hcs::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
    EXPECT_NE(std::string(e.what()).find("dimension 2"), std::string::npos);
  }
}

TEST(IntervalBounds, TwoLevel) {
  const auto q = unit(2);
  const auto [lo, hi] = hcs::interval_bounds(q, 1);
  EXPECT_EQ(lo, -1.0);
  EXPECT_LE(std::abs(hi), 1e-12);
  EXPECT_EQ(code_of([&] { hcs::interval_bounds(q, 0); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { hcs::interval_bounds(q, 3); }), ErrorCode::kIndexOutOfRange);
}

TEST(MaxIntervalWidth, PinnedAndShrinkingWithK) {
  EXPECT_NEAR(hcs::max_interval_width(unit(2)), 1.0, 1e-12);
  const double w10 = hcs::max_interval_width(unit(10));
  const double w30 = hcs::max_interval_width(unit(30));
  const double w50 = hcs::max_interval_width(unit(50));
  EXPECT_NEAR(w10, 0.34345174550895943, 1e-12);
  EXPECT_NEAR(w30, 0.10816193888985129, 1e-12);
  EXPECT_NEAR(w50, 0.064079119778673005, 1e-12);
  EXPECT_GT(w10, w30);
  EXPECT_GT(w30, w50);
}

TEST(QuantizerProperty, TelescopingEndpoint) {
  hcs::Xoshiro256 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto q = random_quantizer(rng);
    const auto p = q.p_boundaries();
    EXPECT_NEAR(p.front() - static_cast<double>(q.k() - 1) * q.delta(), p.back(), 1e-12);
    EXPECT_NEAR(p.back(), hcs::bernoulli_of(q.config().x_sup), 1e-12);
    for (std::size_t j = 0; j < q.k(); ++j) {
      ASSERT_EQ(p[j], p.front() - static_cast<double>(j) * q.delta());
    }
    EXPECT_EQ(q.s_boundaries().front(), q.config().x_inf);
    EXPECT_EQ(q.s_boundaries().back(), q.config().x_sup);
  }
}

// Property: each interior S_j maps to a probability strictly between P_j and P_{j-1}.
TEST(QuantizerProperty, BoundaryMapConsistency) {
  hcs::Xoshiro256 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto q = random_quantizer(rng);
    const auto p = q.p_boundaries();
    const auto s = q.s_boundaries();
    for (std::size_t j = 1; j < q.k(); ++j) {
      const double b = hcs::bernoulli_of(s[j]);
      ASSERT_GT(b, p[j]) << "k=" << q.k() << " j=" << j;
      ASSERT_LT(b, p[j - 1]) << "k=" << q.k() << " j=" << j;
    }
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end(), std::less_equal<>()) &&
                std::adjacent_find(s.begin(), s.end()) == s.end());
  }
}

// Property: the interval returned by quantize brackets the value, and
// quantize is monotone.
TEST(QuantizerProperty, ResidencyAndMonotonicity) {
  hcs::Xoshiro256 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto q = random_quantizer(rng);
    const double lo = q.config().x_inf, hi = q.config().x_sup;
    std::vector<double> xs(200);
    for (auto& x : xs) x = lo + (hi - lo) * rng.uniform();
    xs.push_back(hi);
    std::sort(xs.begin(), xs.end());
    std::size_t previous = 0;
    for (double x : xs) {
      const std::size_t idx = hcs::quantize_value(x, q);
      const auto [a, b] = hcs::interval_bounds(q, idx);
      ASSERT_LE(a, x);
      ASSERT_TRUE(x < b || (idx == q.k() && x == b));
      ASSERT_GE(idx, previous);
      previous = idx;
    }
  }
}

TEST(QuantizerProperty, NearUniformInteriorWidthsAtK50) {
  const auto q = unit(50);
  const auto s = q.s_boundaries();
  double wmin = 1e9, wmax = 0.0;
  for (std::size_t j = 2; j < 50; ++j) {
    const double w = s[j] - s[j - 1];
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  EXPECT_NEAR(wmax / wmin, 15.356130597759507, 1e-9);
  EXPECT_LE(wmax / wmin, 15.4);
}

}  // namespace
