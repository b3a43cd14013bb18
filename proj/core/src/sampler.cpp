#include "biortho/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "biortho/errors.hpp"

namespace biortho {

void EnsembleConfig::validate() const {
  if (n_particles < 1) throw InvalidArgument("n_particles must be >= 1");
  if (!(theta >= 1.0)) throw InvalidArgument("ensemble theta must be >= 1");
  if (!(proposal_scale > 0)) throw InvalidArgument("proposal_scale must be positive");
  weight.validate();
}

std::vector<double> ChainResult::pooled() const {
  std::vector<double> out;
  for (const auto& row : samples) out.insert(out.end(), row.begin(), row.end());
  return out;
}

double log_density_unnormalized(const EnsembleConfig& cfg, const std::vector<double>& lambdas) {
  if (lambdas.size() != static_cast<std::size_t>(cfg.n_particles)) {
    throw InvalidConfiguration("expected " + std::to_string(cfg.n_particles) + " coordinates");
  }
  std::vector<double> l = lambdas;
  std::sort(l.begin(), l.end());
  double total = 0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (!(l[j] > 0)) throw InvalidConfiguration("coordinates must be positive");
    if (j > 0 && !(l[j] > l[j - 1])) throw InvalidConfiguration("coordinates must be pairwise distinct");
    total += cfg.weight.log_eval(l[j]);
    const double lt = std::pow(l[j], cfg.theta);
    for (std::size_t i = 0; i < j; ++i) total += std::log(l[j] - l[i]) + std::log(lt - std::pow(l[i], cfg.theta));
  }
  return total;
}

double metropolis_accept_probability(double delta_log) {
  if (std::isnan(delta_log)) return 0.0;
  return delta_log >= 0 ? 1.0 : std::exp(delta_log);
}

ChainResult run_chain(const EnsembleConfig& cfg, int sweeps, int burn_in, int thinning) {
  cfg.validate();
  if (!(sweeps > burn_in) || burn_in < 0) throw InvalidArgument("run_chain needs sweeps > burn_in >= 0");
  if (thinning < 1) throw InvalidArgument("thinning must be >= 1");
  const int n = cfg.n_particles;
  const double theta = cfg.theta;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> x(n), xt(n), logw(n);
  for (int i = 0; i < n; ++i) {
    x[i] = cfg.proposal_scale * (i + 1);
    xt[i] = std::pow(x[i], theta);
    logw[i] = cfg.weight.log_eval(x[i]);
  }
  double sigma = cfg.proposal_scale;
  ChainResult out;
  out.sweeps_total = sweeps;
  out.burn_in = burn_in;
  out.thinning = thinning;
  long accepted = 0, proposed = 0, batch_accepted = 0, batch_proposed = 0;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const double y = std::abs(x[i] + sigma * step(rng));
      double delta = -INFINITY;
      if (y > 0) {
        const double yt = std::pow(y, theta);
        const double lw = cfg.weight.log_eval(y);
        delta = lw - logw[i];
        for (int j = 0; j < n && std::isfinite(delta); ++j) {
          if (j == i) continue;
          const double dn = std::abs(y - x[j]), dtn = std::abs(yt - xt[j]);
          if (dn == 0 || dtn == 0) delta = -INFINITY;
          else delta += std::log(dn / std::abs(x[i] - x[j])) + std::log(dtn / std::abs(xt[i] - xt[j]));
        }
        const bool accept = unit(rng) < metropolis_accept_probability(delta);
        if (accept) {
          x[i] = y;
          xt[i] = yt;
          logw[i] = lw;
        }
        if (sweep < burn_in) batch_accepted += accept;
        else accepted += accept;
      }
      if (sweep < burn_in) ++batch_proposed;
      else ++proposed;
    }
    if (sweep < burn_in && (sweep + 1) % 50 == 0) {
      const double rate = static_cast<double>(batch_accepted) / std::max(1L, batch_proposed);
      sigma *= std::exp(rate - 0.3);
      batch_accepted = batch_proposed = 0;
    }
    if (sweep >= burn_in && (sweep - burn_in) % thinning == 0) {
      std::vector<double> row = x;
      std::sort(row.begin(), row.end());
      out.samples.push_back(std::move(row));
    }
  }
  out.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0.0;
  out.final_proposal_scale = sigma;
  return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

double ks_against_measure(const ChainResult& result, const EquilibriumMeasure& measure) {
  return ks_distance(result.pooled(), [&](double x) { return measure.cdf(x); });
}

std::vector<double> sample_measure(const EquilibriumMeasure& measure, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample count must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(count);
  for (auto& v : out) v = measure.quantile(unit(rng));
  return out;
}

}  // namespace biortho
