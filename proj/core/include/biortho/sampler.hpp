#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "biortho/equilibrium.hpp"
#include "biortho/potentials.hpp"

namespace biortho {

struct EnsembleConfig {
  int n_particles = 10;
  double theta = 2.0;
  Weight weight;
  /// Initial random-walk step; tuned toward 30% acceptance during burn-in.
  double proposal_scale = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ChainResult {
  /// Kept sweeps, each row sorted ascending.
  std::vector<std::vector<double>> samples;
  /// Acceptance over the kept (post burn-in) sweeps.
  double acceptance_rate = 0.0;
  double final_proposal_scale = 0.0;
  int sweeps_total = 0;
  int burn_in = 0;
  int thinning = 1;

  std::vector<double> pooled() const;
};

/// log of Delta(l) Delta(l^theta) prod w(l_j), evaluated on the sorted configuration.
double log_density_unnormalized(const EnsembleConfig& cfg, const std::vector<double>& lambdas);

/// min(1, exp(delta_log)).
double metropolis_accept_probability(double delta_log);

/// Single-site Gaussian random-walk Metropolis with reflection at 0.
/// `sweeps` counts all sweeps including burn-in; every `thinning`-th sweep
/// after burn-in is kept.
ChainResult run_chain(const EnsembleConfig& cfg, int sweeps, int burn_in, int thinning);

/// Kolmogorov-Smirnov distance between samples and a continuous CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// KS distance between the pooled particles and the measure's CDF.
double ks_against_measure(const ChainResult& result, const EquilibriumMeasure& measure);

/// Independent draws from the measure by inverse-CDF sampling.
std::vector<double> sample_measure(const EquilibriumMeasure& measure, int count, std::uint64_t seed);

}  // namespace biortho
