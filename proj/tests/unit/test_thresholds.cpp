#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "patchsize/thresholds.hpp"

using namespace patchsize;

namespace {

// Independent evaluation of the critical size in long double.
std::uint64_t n_min_reference(long double rho, long double s, long double delta, long double eps) {
  const long double p = rho / ((1 + eps) * s);
  const long double mu = s * p;
  return static_cast<std::uint64_t>(std::ceil(s + 3 * mu / ((rho - mu) * (rho - mu)) * std::log(4 / delta)));
}

// Binomial tail frequency by direct sampling.
double tail_frequency(std::uint64_t nu, double p, double threshold, bool upper, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> bin(nu, p);
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    const double x = static_cast<double>(bin(rng));
    hits += upper ? (x >= threshold) : (x <= threshold);
  }
  return static_cast<double>(hits) / trials;
}

}  // namespace

TEST(CriticalSize, WorkedExampleValues) {
  const CriticalSize a = critical_patch_size({1.0, 10, 0.01, 0.1});
  EXPECT_EQ(a.n_min, 1988u);
  EXPECT_NEAR(a.p_eps, 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(a.mu, 10.0 / 11.0, 1e-15);
  EXPECT_EQ(critical_patch_size({1.0, 10, 0.01, 0.03}).n_min, 20581u);
}

TEST(CriticalSize, MatchesReferenceAcrossGrid) {
  for (double rho : {0.5, 1.0, 3.0})
    for (std::uint64_t s : {1u, 10u, 100u})
      for (double delta : {0.001, 0.01, 0.2})
        for (double eps : {0.05, 0.1, 0.5, 2.0}) {
          if (rho / ((1 + eps) * s) > 1.0) continue;
          EXPECT_EQ(critical_patch_size({rho, s, delta, eps}).n_min, n_min_reference(rho, s, delta, eps))
              << rho << ' ' << s << ' ' << delta << ' ' << eps;
        }
}

TEST(CriticalSize, MaxEdgesByIntegerArithmetic) {
  // p_eps = 1/11, so m_max = floor(n (n - 1) / 22).
  const CriticalSizeQuery q{1.0, 10, 0.01, 0.1};
  EXPECT_EQ(max_edges(q, 1988), 1988u * 1987u / 22u);
  EXPECT_EQ(max_edges(q, 1988), 179552u);
  for (std::uint64_t n = 1988; n < 2100; ++n) EXPECT_EQ(max_edges(q, n), n * (n - 1) / 22) << n;
  EXPECT_THROW(max_edges(q, 1987), std::invalid_argument);
}

TEST(CriticalSize, RejectsInvalidQueries) {
  EXPECT_THROW(critical_patch_size({0.0, 10, 0.01, 0.1}), std::invalid_argument);
  EXPECT_THROW(critical_patch_size({1.0, 0, 0.01, 0.1}), std::invalid_argument);
  EXPECT_THROW(critical_patch_size({1.0, 10, 0.0, 0.1}), std::invalid_argument);
  EXPECT_THROW(critical_patch_size({1.0, 10, 1.0, 0.1}), std::invalid_argument);
  EXPECT_THROW(critical_patch_size({1.0, 10, 0.01, 0.0}), std::invalid_argument);
  EXPECT_THROW(critical_patch_size({100.0, 10, 0.01, 0.1}), std::invalid_argument);  // p_eps > 1
}

TEST(CriticalSize, MonotoneInParameters) {
  // Smaller slack or smaller failure probability needs a larger patch.
  std::uint64_t prev = 0;
  for (double eps : {2.0, 1.0, 0.5, 0.2, 0.1, 0.05}) {
    const auto n = critical_patch_size({1.0, 10, 0.01, eps}).n_min;
    EXPECT_GT(n, prev);
    prev = n;
  }
  EXPECT_GT(critical_patch_size({1.0, 10, 0.001, 0.1}).n_min, critical_patch_size({1.0, 10, 0.01, 0.1}).n_min);
  // Healthy-above count shrinks as rho moves away from s/2.
  std::uint64_t last = UINT64_MAX;
  for (double rho : {5.5, 6.0, 8.0, 12.0, 30.0}) {
    const auto c = half_uniform_bounds(10, rho, 0.01).count;
    EXPECT_LE(c, last);
    last = c;
  }
}

TEST(HalfUniform, ReferenceValues) {
  // rho > s/2: n >= 6 s / (s - 2 rho)^2 log(1/delta) is healthy.
  const HalfUniformBound healthy = half_uniform_bounds(10, 6.0, 0.01);
  EXPECT_EQ(healthy.kind, HalfUniformKind::healthy_above);
  EXPECT_NEAR(healthy.bound, 60.0 / 4.0 * std::log(100.0), 1e-12);
  EXPECT_EQ(healthy.count, 70u);
  // rho < s/2: n <= delta exp((s - 2 rho)^2 / (4 s)) is deadly.
  const HalfUniformBound deadly = half_uniform_bounds(100, 10.0, 0.01);
  EXPECT_EQ(deadly.kind, HalfUniformKind::deadly_below);
  EXPECT_NEAR(deadly.bound, 0.01 * std::exp(16.0), 1e-6);
  EXPECT_EQ(deadly.count, 88861u);
  EXPECT_EQ(half_uniform_bounds(10, 4.0, 0.01).count, 0u);
  EXPECT_EQ(half_uniform_bounds(10, 4.0, 0.01).kind, HalfUniformKind::deadly_below);
  EXPECT_THROW(half_uniform_bounds(10, 5.0, 0.01), std::invalid_argument);
}

TEST(Chernoff, ClosedForms) {
  const ChernoffQuery q{1000, 0.2, 0.1};
  EXPECT_NEAR(chernoff_upper(q), std::exp(-0.01 * 200 / 3), 1e-15);
  EXPECT_NEAR(chernoff_lower(q), std::exp(-0.01 * 200 / 2), 1e-15);
  EXPECT_NEAR(chernoff_symmetric(q), 2 * std::exp(-0.01 * 200 / 3), 1e-15);
  EXPECT_THROW(chernoff_upper({10, 1.5, 0.1}), std::invalid_argument);
  EXPECT_THROW(chernoff_upper({10, 0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(chernoff_upper({0, 0.5, 0.1}), std::invalid_argument);
  EXPECT_NEAR(chernoff_upper({300, 0.1, 0.5}), 0.082085, 1e-6);
  EXPECT_NEAR(chernoff_upper({300, 0.1, 1e-9}), 1.0, 1e-12);
}

TEST(Chernoff, EveryVariantDominatesSampledTailAtReferencePoint) {
  const std::uint64_t nu = 300;
  const double p = 0.1, mu = 30.0;
  std::mt19937_64 rng(77);
  std::binomial_distribution<std::uint64_t> bin(nu, p);
  const int trials = 100000;
  std::vector<double> xs(trials);
  for (auto& x : xs) x = static_cast<double>(bin(rng));
  for (double eps : {0.25, 0.5, 1.0}) {
    const ChernoffQuery q{nu, p, eps};
    int up = 0, lo = 0, both = 0;
    for (double x : xs) {
      up += x >= (1 + eps) * mu;
      lo += x <= (1 - eps) * mu;
      both += std::abs(x - mu) >= eps * mu;
    }
    EXPECT_LE(up / double(trials), chernoff_upper(q)) << eps;
    EXPECT_LE(lo / double(trials), chernoff_lower(q)) << eps;
    EXPECT_LE(both / double(trials), chernoff_symmetric(q)) << eps;
    EXPECT_GT(chernoff_upper(q), 0.0);
    EXPECT_LE(chernoff_upper(q), 1.0);
  }
}

TEST(Chernoff, BoundsDominateSampledTails) {
  const int trials = 200000;
  std::uint64_t seed = 1;
  for (std::uint64_t nu : {50u, 200u, 1000u})
    for (double p : {0.05, 0.3})
      for (double eps : {0.1, 0.3, 0.6}) {
        const ChernoffQuery q{nu, p, eps};
        const double mu = static_cast<double>(nu) * p;
        const double up = tail_frequency(nu, p, (1 + eps) * mu, true, trials, seed++);
        const double lo = tail_frequency(nu, p, (1 - eps) * mu, false, trials, seed++);
        // Allow three binomial standard errors of sampling noise.
        auto slack = [&](double b) { return 3.0 * std::sqrt(b * (1 - b) / trials) + 1e-12; };
        EXPECT_LE(up, chernoff_upper(q) + slack(chernoff_upper(q))) << nu << ' ' << p << ' ' << eps;
        EXPECT_LE(lo, chernoff_lower(q) + slack(chernoff_lower(q))) << nu << ' ' << p << ' ' << eps;
      }
}

TEST(Thresholds, ConnectivityAndSurvival) {
  EXPECT_NEAR(connectivity_threshold(2000), std::log(2000.0) / 2000.0, 1e-18);
  EXPECT_THROW(connectivity_threshold(1), std::invalid_argument);
  EXPECT_NEAR(connectivity_threshold(3), 0.36620, 1e-5);
  EXPECT_NEAR(connectivity_threshold(1000), 0.0069078, 1e-7);
  EXPECT_DOUBLE_EQ(survival_threshold(50, 0.2), 10.0);
  EXPECT_NEAR(survival_threshold(10, 1.0 / 11.0), 10.0 / 11.0, 1e-15);
  EXPECT_THROW(survival_threshold(0, 0.4), std::invalid_argument);
}

TEST(Thresholds, SurvivalCheckBoundary) {
  EXPECT_EQ(survival_check(1.0, 1.0), Survival::healthy);
  EXPECT_EQ(survival_check(0.0, 0.5), Survival::healthy);
  EXPECT_EQ(survival_check(1.0 + 1e-12, 1.0), Survival::deadly);
  EXPECT_THROW(survival_check(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(survival_check(1.0, 0.0), std::invalid_argument);
}
