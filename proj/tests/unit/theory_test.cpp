#include <gtest/gtest.h>

#include <vector>

#include "minfo/errors.hpp"
#include "minfo/rng.hpp"
#include "minfo/theory.hpp"

namespace minfo {
namespace {

// ceil(2 (log 160 + 2 + log 40) / 0.01)
TEST(SampleComplexity, OneDimensional) {
  EXPECT_EQ(sample_complexity({1, 1, 1, 1, 0.1, 0.05}), 2153u);
}

// ceil(2 (2 log(160 sqrt 2) + 4 + log 20) / 0.01)
TEST(SampleComplexity, TwoDimensional) {
  EXPECT_EQ(sample_complexity({2, 1, 1, 1, 0.1, 0.1}), 3568u);
}

TEST(SampleComplexity, HalvingEpsIncreases) {
  const ComplexityInputs a{3, 1.5, 2, 4, 0.2, 0.1};
  ComplexityInputs b = a;
  b.eps /= 2;
  EXPECT_GT(sample_complexity(b), sample_complexity(a));
}

TEST(SampleComplexity, MonotoneOnRandomGrid) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const ComplexityInputs base{std::floor(rng.uniform(1, 50)), rng.uniform(0.1, 3),
                                rng.uniform(0.5, 5), rng.uniform(0.5, 5), rng.uniform(0.01, 0.5),
                                rng.uniform(0.01, 0.5)};
    const auto n = sample_complexity(base);
    auto up = [&](auto field, double factor) {
      ComplexityInputs c = base;
      c.*field *= factor;
      return sample_complexity(c);
    };
    EXPECT_GE(up(&ComplexityInputs::d, 2.0), n);
    EXPECT_GE(up(&ComplexityInputs::M, 1.5), n);
    EXPECT_GE(up(&ComplexityInputs::L, 1.5), n);
    EXPECT_GE(up(&ComplexityInputs::K, 1.5), n);
    EXPECT_LE(up(&ComplexityInputs::eps, 1.5), n);
    EXPECT_LE(up(&ComplexityInputs::delta, 1.5), n);
  }
}

TEST(SampleComplexity, DomainErrors) {
  EXPECT_THROW(sample_complexity({0, 1, 1, 1, 0.1, 0.1}), ArgumentError);
  EXPECT_THROW(sample_complexity({1, 1, 1, 1, 0.1, 1.0}), ArgumentError);
  EXPECT_THROW(sample_complexity({1, 1, 1, 1, -0.1, 0.1}), ArgumentError);
  // 16 K L sqrt(d) / eps <= 1 puts the log outside its positive domain.
  EXPECT_THROW(sample_complexity({1, 1, 0.01, 1, 1.0, 0.1}), ArgumentError);
}

TEST(Dominance, EqualityAtUnitStatistic) {
  const std::vector<double> ones(5, 1.0);
  const auto r = dv_dominates_f_check(ones, ones);
  EXPECT_EQ(r.dv, 0.0);
  EXPECT_EQ(r.f, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Dominance, HandEvaluated) {
  const auto r = dv_dominates_f_check(std::vector<double>{1, 1}, std::vector<double>{0, 2});
  EXPECT_NEAR(r.dv, -0.433781, 5e-7);
  EXPECT_NEAR(r.f, -0.543081, 5e-7);
  EXPECT_TRUE(r.holds);
}

TEST(Dominance, NeverViolatedOnRandomGaussianVectors) {
  Rng rng(11);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> tj(1 + rng() % 16), tm(1 + rng() % 16);
    const double scale = rng.uniform(0.01, 5.0);
    const double shift = rng.uniform(-3.0, 3.0);
    for (double& v : tj) v = shift + scale * rng.normal();
    for (double& v : tm) v = shift + scale * rng.normal();
    violations += dv_dominates_f_check(tj, tm).holds ? 0 : 1;
  }
  EXPECT_EQ(violations, 0);
}

}  // namespace
}  // namespace minfo
