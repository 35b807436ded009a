#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "minfo/errors.hpp"
#include "minfo/sampling.hpp"

namespace minfo {
namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double corr(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::vector<double>> sorted_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  std::ranges::sort(rows);
  return rows;
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    (void)c;
  }
  EXPECT_NE(Rng(42)(), Rng(43)());
}

TEST(Rng, DeriveSeedIsPureAndTagSensitive) {
  EXPECT_EQ(derive_seed(7, "mine_dv", 3), derive_seed(7, "mine_dv", 3));
  EXPECT_NE(derive_seed(7, "mine_dv", 3), derive_seed(7, "mine_f", 3));
  EXPECT_NE(derive_seed(7, "mine_dv", 3), derive_seed(7, "mine_dv", 4));
  EXPECT_NE(derive_seed(7, "mine_dv", 3), derive_seed(8, "mine_dv", 3));
}

TEST(GenGaussian, IndependentWhenRhoZero) {
  Rng rng(1);
  const auto b = gen_gaussian({1, 0.0}, 50000, rng);
  const double c = corr(b.x.column(0), b.z.column(0));
  EXPECT_GE(c, -0.02);
  EXPECT_LE(c, 0.02);
}

TEST(GenGaussian, CorrelationMatchesRho) {
  Rng rng(2);
  const auto b = gen_gaussian({1, 0.9}, 50000, rng);
  const double c = corr(b.x.column(0), b.z.column(0));
  EXPECT_GE(c, 0.885);
  EXPECT_LE(c, 0.915);
}

TEST(GenGaussian, StandardizedMarginals) {
  Rng rng(3);
  const auto b = gen_gaussian({3, -0.6}, 50000, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    for (const auto& col : {b.x.column(i), b.z.column(i)}) {
      const double v = variance(col);
      EXPECT_GE(v, 0.97);
      EXPECT_LE(v, 1.03);
    }
  }
}

TEST(GenGaussian, CrossComponentsUncorrelated) {
  const std::size_t n = 50000;
  Rng rng(4);
  const auto b = gen_gaussian({4, 0.8}, n, rng);
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      EXPECT_LE(std::fabs(corr(b.x.column(i), b.z.column(j))), tol) << i << "," << j;
    }
  }
}

TEST(GenGaussian, RejectsDegenerateCorrelation) {
  Rng rng(5);
  EXPECT_THROW(gen_gaussian({1, 1.0}, 10, rng), ArgumentError);
  EXPECT_THROW(gen_gaussian({1, -1.2}, 10, rng), ArgumentError);
  EXPECT_THROW(gen_gaussian({1, 0.5}, 0, rng), ArgumentError);
  EXPECT_THROW(gen_gaussian({0, 0.5}, 10, rng), ArgumentError);
}

TEST(GenGaussian, DeterministicForSeed) {
  Rng a(6), b(6);
  const auto x = gen_gaussian({2, 0.3}, 100, a);
  const auto y = gen_gaussian({2, 0.3}, 100, b);
  EXPECT_EQ(x.x, y.x);
  EXPECT_EQ(x.z, y.z);
}

TEST(GenNonlinear, ZeroNoiseIdentityIsExact) {
  Rng rng(7);
  const auto b = gen_nonlinear({Nonlinearity::Identity, 0.0, 3}, 1000, rng);
  EXPECT_EQ(b.x, b.z);
  for (const double v : b.x.data()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(GenNonlinear, SineIsCenteredOnSymmetricDomain) {
  Rng rng(8);
  const auto b = gen_nonlinear({Nonlinearity::Sine, 0.3, 1}, 50000, rng);
  EXPECT_LE(std::fabs(mean(b.z.column(0))), 0.02);
}

// Var(x^3) for x ~ U(-1, 1) is E[x^6] = 1/7; independent noise adds sigma^2.
TEST(GenNonlinear, CubeVarianceMatchesMoment) {
  Rng rng(9);
  const auto b = gen_nonlinear({Nonlinearity::Cube, 0.5, 1}, 50000, rng);
  EXPECT_NEAR(variance(b.z.column(0)), 1.0 / 7.0 + 0.25, 0.01);
}

TEST(GenNonlinear, RejectsBadSpec) {
  Rng rng(10);
  EXPECT_THROW(gen_nonlinear({Nonlinearity::Sine, -0.1, 1}, 10, rng), ArgumentError);
  EXPECT_THROW(gen_nonlinear({Nonlinearity::Sine, 0.1, 0}, 10, rng), ArgumentError);
}

TEST(MarginalShuffle, SingleRowUnchanged) {
  Rng rng(11);
  const SampleBatch b{Matrix{{1.0, 2.0}}, Matrix{{3.0}}};
  const auto m = marginal_shuffle(b, rng);
  EXPECT_EQ(m.x, b.x);
  EXPECT_EQ(m.z_bar, b.z);
}

TEST(MarginalShuffle, PreservesZMultisetAndX) {
  Rng data(12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = gen_gaussian({2, 0.5}, 37, data);
    Rng rng(seed);
    const auto m = marginal_shuffle(b, rng);
    EXPECT_EQ(m.x, b.x);
    EXPECT_EQ(sorted_rows(m.z_bar), sorted_rows(b.z));
  }
}

TEST(MarginalShuffle, ReproducibleForSeed) {
  const SampleBatch b{Matrix{{1.0}, {2.0}}, Matrix{{10.0}, {20.0}}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r1(seed), r2(seed);
    EXPECT_EQ(marginal_shuffle(b, r1).z_bar, marginal_shuffle(b, r2).z_bar);
  }
}

TEST(MarginalShuffle, DecouplesCorrelatedPairs) {
  Rng rng(13);
  const auto b = gen_gaussian({1, 0.9}, 50000, rng);
  const auto m = marginal_shuffle(b, rng);
  EXPECT_LE(std::fabs(corr(m.x.column(0), m.z_bar.column(0))), 0.02);
}

TEST(MarginalResample, DecouplesAndHasShape) {
  Rng rng(14);
  const auto sampler = gaussian_sampler({2, 0.9});
  const auto m = marginal_resample(sampler, 50000, rng);
  EXPECT_EQ(m.x.rows(), 50000u);
  EXPECT_EQ(m.x.cols(), 2u);
  EXPECT_EQ(m.z_bar.rows(), 50000u);
  EXPECT_EQ(m.z_bar.cols(), 2u);
  EXPECT_LE(std::fabs(corr(m.x.column(0), m.z_bar.column(0))), 0.02);
}

TEST(MarginalResample, ReproducibleForSeed) {
  const auto sampler = gaussian_sampler({1, 0.5});
  Rng r1(15), r2(15);
  const auto a = marginal_resample(sampler, 64, r1);
  const auto b = marginal_resample(sampler, 64, r2);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.z_bar, b.z_bar);
}

TEST(Names, RoundTrip) {
  for (const auto f : {Nonlinearity::Identity, Nonlinearity::Cube, Nonlinearity::Sine}) {
    EXPECT_EQ(parse_nonlinearity(to_string(f)), f);
  }
  for (const auto m : {MarginalMode::Shuffle, MarginalMode::Resample}) {
    EXPECT_EQ(parse_marginal_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_nonlinearity("tanh"), ArgumentError);
}

}  // namespace
}  // namespace minfo
