#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "biortho/errors.hpp"
#include "biortho/sampler.hpp"
#include "generators.hpp"

namespace biortho {
namespace {

using testing::Gen;
using testing::kPropertyCases;

EnsembleConfig coupled(int n, const Potential& v, std::uint64_t seed) {
  EnsembleConfig cfg;
  cfg.n_particles = n;
  cfg.theta = 2;
  cfg.weight = Weight{0.0, n, v};
  cfg.seed = seed;
  return cfg;
}

TEST(LogDensity, Examples) {
  EnsembleConfig cfg;
  cfg.n_particles = 1;
  EXPECT_DOUBLE_EQ(log_density_unnormalized(cfg, {2.5}), -2.5);
  cfg.n_particles = 2;
  EXPECT_NEAR(log_density_unnormalized(cfg, {1.0, 2.0}), std::log(1.0) + std::log(3.0) - 3.0, 1e-15);
  EXPECT_THROW(log_density_unnormalized(cfg, {1.0, 1.0}), InvalidConfiguration);
  EXPECT_THROW(log_density_unnormalized(cfg, {0.0, 1.0}), InvalidConfiguration);
  EXPECT_THROW(log_density_unnormalized(cfg, {1.0}), InvalidConfiguration);
}

TEST(LogDensity, PermutationInvariant) {
  Gen gen(71);
  for (int i = 0; i < kPropertyCases; ++i) {
    EnsembleConfig cfg;
    cfg.n_particles = gen.integer(1, 8);
    cfg.theta = gen.uniform(1, 3);
    std::vector<double> l(cfg.n_particles);
    for (double& x : l) x = gen.uniform(0.01, 5);
    double base = log_density_unnormalized(cfg, l);
    std::shuffle(l.begin(), l.end(), std::mt19937_64(gen.seed()));
    EXPECT_NEAR(log_density_unnormalized(cfg, l), base, 1e-12 * std::max(1.0, std::abs(base)));
  }
}

TEST(Metropolis, AcceptProbability) {
  EXPECT_EQ(metropolis_accept_probability(0.5), 1.0);
  EXPECT_EQ(metropolis_accept_probability(0.0), 1.0);
  EXPECT_DOUBLE_EQ(metropolis_accept_probability(-1.0), std::exp(-1.0));
  EXPECT_EQ(metropolis_accept_probability(std::nan("")), 0.0);
}

TEST(Metropolis, TwoStateDetailedBalance) {
  // With a symmetric proposal between two states the chain moves A -> B with
  // probability accept(log pi_B - log pi_A). Detailed balance requires
  // pi_A P(A -> B) = pi_B P(B -> A) for every pair of log densities.
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      double la = 0.25 * i, lb = 0.25 * j;
      double flow_ab = std::exp(la) * metropolis_accept_probability(lb - la);
      double flow_ba = std::exp(lb) * metropolis_accept_probability(la - lb);
      EXPECT_NEAR(flow_ab, flow_ba, 1e-12 * std::max(flow_ab, flow_ba));
    }
  }
}

TEST(Chain, SingleParticleIsExponential) {
  EnsembleConfig cfg;
  cfg.n_particles = 1;
  cfg.theta = 2.7;
  cfg.proposal_scale = 1.0;
  auto res = run_chain(cfg, 1000 + 10000 * 5, 1000, 5);
  ASSERT_EQ(res.samples.size(), 10000u);
  double ks = ks_distance(res.pooled(), [](double x) { return x <= 0 ? 0.0 : 1 - std::exp(-x); });
  EXPECT_LE(ks, 0.05);
}

TEST(Chain, BookkeepingAndTuning) {
  auto cfg = coupled(10, Potential::linear(1), 3);
  auto res = run_chain(cfg, 3000, 500, 10);
  EXPECT_EQ(res.sweeps_total, 3000);
  EXPECT_EQ(res.burn_in, 500);
  EXPECT_EQ(res.thinning, 10);
  EXPECT_EQ(res.samples.size(), 250u);
  EXPECT_GE(res.acceptance_rate, 0.1);
  EXPECT_LE(res.acceptance_rate, 0.7);
  EXPECT_GT(res.final_proposal_scale, 0);
  for (const auto& row : res.samples) {
    ASSERT_EQ(row.size(), 10u);
    EXPECT_TRUE(std::is_sorted(row.begin(), row.end()));
    EXPECT_GT(row.front(), 0.0);
    // The sorted configuration must have a finite density.
    EXPECT_TRUE(std::isfinite(log_density_unnormalized(cfg, row)));
  }
  EXPECT_THROW(run_chain(cfg, 100, 100, 1), InvalidArgument);
  EXPECT_THROW(run_chain(cfg, 100, 10, 0), InvalidArgument);
}

TEST(Chain, DeterministicPerSeed) {
  auto cfg = coupled(8, Potential::linear(1), 99);
  auto a = run_chain(cfg, 600, 100, 5), b = run_chain(cfg, 600, 100, 5);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.acceptance_rate, b.acceptance_rate);
  cfg.seed = 100;
  EXPECT_NE(run_chain(cfg, 600, 100, 5).samples, a.samples);
}

TEST(Chain, ConfigValidation) {
  EnsembleConfig cfg;
  cfg.n_particles = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.n_particles = 2;
  cfg.proposal_scale = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.proposal_scale = 1;
  cfg.theta = 0.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Ks, SmallExamples) {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_DOUBLE_EQ(ks_distance({0.5}, uniform), 0.5);
  EXPECT_NEAR(ks_distance({0.25, 0.75}, uniform), 0.25, 1e-15);
  EXPECT_THROW(ks_distance({}, uniform), InvalidArgument);
}

TEST(Ks, InverseCdfSamplesMatchTheMeasure) {
  auto m = classify_edge(Potential::linear(1), 2);
  auto draws = sample_measure(m, 100000, 5);
  EXPECT_LE(ks_distance(draws, [&](double x) { return m.cdf(x); }), 0.01);
  EXPECT_EQ(draws, sample_measure(m, 100000, 5));
}

TEST(Ks, LaguerreEnsembleApproachesTheMeasure) {
  auto m = classify_edge(Potential::linear(1), 2);
  double ks10 = ks_against_measure(run_chain(coupled(10, Potential::linear(1), 7), 20000, 2000, 10), m);
  double ks50 = ks_against_measure(run_chain(coupled(50, Potential::linear(1), 7), 20000, 2000, 10), m);
  EXPECT_LE(ks50, 0.1);
  EXPECT_LT(ks50, ks10);
}

TEST(Ks, SoftEdgeEnsemble) {
  auto m = classify_edge(Potential::quadratic(1, -3), 2);
  auto res = run_chain(coupled(50, Potential::quadratic(1, -3), 11), 20000, 2000, 10);
  EXPECT_LE(ks_against_measure(res, m), 0.1);
  auto pooled = res.pooled();
  EXPECT_GE(*std::min_element(pooled.begin(), pooled.end()), m.left / 2);
}

}  // namespace
}  // namespace biortho
