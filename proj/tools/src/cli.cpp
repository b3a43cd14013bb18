#include "biortho_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biortho/biorthogonal.hpp"
#include "biortho/conformal.hpp"
#include "biortho/equilibrium.hpp"
#include "biortho/errors.hpp"
#include "biortho/sampler.hpp"

namespace biortho::cli {

namespace {

Weight make_weight(const RunConfig& cfg, int n_scale = 1) {
  Weight w;
  w.alpha = cfg.alpha;
  w.n_scale = n_scale;
  if (cfg.weight == "laguerre") w.potential = Potential::linear(1.0);
  else w.potential = Potential::parse(cfg.potential);
  w.validate();
  return w;
}

MomentMethod moment_method(const std::string& name) {
  if (name == "automatic") return MomentMethod::automatic;
  if (name == "closed_form") return MomentMethod::closed_form;
  if (name == "quadrature") return MomentMethod::quadrature;
  throw InvalidConfiguration("unknown moment method '" + name + "'");
}

PrecisionContext context(const RunConfig& cfg) {
  PrecisionContext ctx;
  ctx.mantissa_bits = cfg.bits;
  ctx.target_tol = std::pow(2.0, -0.9 * cfg.bits);
  ctx.validate();
  return ctx;
}

Fraction require_fraction(const Theta& theta) {
  if (!theta.is_rational()) throw IrrationalTheta("this command needs theta as an exact fraction a/b");
  return *theta.fraction();
}

// Output sink: a file or stdout, always starting with the config echo.
class Sink {
 public:
  explicit Sink(const RunConfig& cfg) {
    const std::string path = cfg.out.empty() ? cfg.default_output() : cfg.out;
    if (path != "-") {
      file_.open(path);
      if (!file_) throw InvalidConfiguration("cannot open output file '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int cmd_polys(const RunConfig& cfg) {
  const PrecisionContext ctx = context(cfg);
  PrecisionGuard guard(ctx);
  const auto sys = build_system(make_weight(cfg), Theta::parse(cfg.theta), cfg.jmax, ctx, moment_method(cfg.moments));
  Sink sink(cfg);
  sink.os() << config_echo(cfg) << '\n';
  write_coefficients_csv(sink.os(), sys);
  return kOk;
}

int cmd_recurrence(const RunConfig& cfg) {
  const Theta theta = Theta::parse(cfg.theta);
  const Fraction fr = require_fraction(theta);
  const PrecisionContext ctx = context(cfg);
  PrecisionGuard guard(ctx);
  const auto sys = build_system(make_weight(cfg), theta, cfg.jmax, ctx, moment_method(cfg.moments));
  Sink sink(cfg);
  auto& os = sink.os();
  os << config_echo(cfg) << '\n' << "k,j,u,v,recurrence_residual,symmetry_residual\n";
  double worst = 0;
  for (int k = 0; k + fr.a <= cfg.jmax; ++k) {
    const RecurrenceCoeffs rc = recurrence_coeffs(sys, k);
    const Real rec = recurrence_residual(sys, rc), sym = symmetry_residual(sys, k);
    worst = std::max({worst, to_double(rec), to_double(sym)});
    for (std::size_t j = 0; j < rc.u.size(); ++j) {
      os << k << ',' << j << ',' << to_decimal(rc.u[j]) << ',' << to_decimal(rc.v[j]) << ',' << to_decimal(rec, 6)
         << ',' << to_decimal(sym, 6) << '\n';
    }
  }
  return worst <= cfg.tol ? kOk : kValidationFailure;
}

int cmd_cd_check(const RunConfig& cfg) {
  const Theta theta = Theta::parse(cfg.theta);
  const Fraction fr = require_fraction(theta);
  const PrecisionContext ctx = context(cfg);
  PrecisionGuard guard(ctx);
  const int jmax = std::max(cfg.jmax, cfg.n - 1 + static_cast<int>(fr.a));
  const auto sys = build_system(make_weight(cfg), theta, jmax, ctx, moment_method(cfg.moments));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, cfg.xmax);
  Sink sink(cfg);
  auto& os = sink.os();
  os << config_echo(cfg) << '\n' << "n,x,y,residual\n";
  double worst = 0;
  for (int p = 0; p < cfg.points; ++p) {
    double x = coord(rng), y = coord(rng);
    if (std::abs(std::pow(x, fr.a) - std::pow(y, fr.a)) < 1e-6) continue;
    for (int n = 1; n <= cfg.n; ++n) {
      const Real r = verify_cd(sys, n, Real(x), Real(y));
      worst = std::max(worst, to_double(r));
      os << n << ',' << num(x) << ',' << num(y) << ',' << to_decimal(r, 6) << '\n';
    }
  }
  return worst <= cfg.tol ? kOk : kValidationFailure;
}

int cmd_kernel(const RunConfig& cfg) {
  const PrecisionContext ctx = context(cfg);
  PrecisionGuard guard(ctx);
  const auto sys = build_system(make_weight(cfg), Theta::parse(cfg.theta), std::max(cfg.jmax, cfg.n - 1), ctx,
                                moment_method(cfg.moments));
  Sink sink(cfg);
  auto& os = sink.os();
  os << config_echo(cfg) << '\n' << "x,y,K\n";
  for (int i = 1; i <= cfg.grid; ++i) {
    const double x = cfg.xmax * i / cfg.grid;
    for (int j = 1; j <= cfg.grid; ++j) {
      const double y = cfg.xmax * j / cfg.grid;
      os << num(x) << ',' << num(y) << ',' << num(to_double(kernel(sys, cfg.n, Real(x), Real(y)))) << '\n';
    }
  }
  return kOk;
}

int cmd_curve(const RunConfig& cfg) {
  const double theta = Theta::parse(cfg.theta).value();
  const ConformalMap m = cfg.c0 > 0 || cfg.c1 > 0 ? ConformalMap::soft(theta, cfg.c0, cfg.c1)
                                                   : ConformalMap::hard(theta, cfg.c);
  const CurveSamples curve = trace_curve(m, cfg.curve_nodes);
  Sink sink(cfg);
  sink.os() << config_echo(cfg) << '\n';
  write_curve_csv(sink.os(), m, curve);
  return kOk;
}

std::vector<double> interior_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * (i + 0.5) / n;
  return g;
}

int cmd_eq(const RunConfig& cfg) {
  const double theta = Theta::parse(cfg.theta).value();
  EquilibriumMeasure m = classify_edge(Potential::parse(cfg.potential), theta);
  m.lagrange_ell = verify_euler_lagrange(m, interior_grid(m.left, m.right, 30), {}).ell_estimate;
  const auto xs = interior_grid(m.left, m.right, cfg.grid);
  const auto psi = density_on_grid(m, xs);
  const std::string nan = "nan";
  const std::string d1 = m.edge_constants ? num(m.edge_constants->d1) : nan;
  const std::string d2 = m.edge_constants ? num(m.edge_constants->d2) : nan;
  const std::string c1 = m.regime == EdgeRegime::SoftEdge ? num(m.map.c1()) : nan;
  const std::string tail = to_string(m.regime) + ',' + num(m.left) + ',' + num(m.right) + ',' + num(m.map.c0()) + ',' +
                           c1 + ',' + d1 + ',' + d2 + ',' + num(*m.lagrange_ell);
  Sink sink(cfg);
  auto& os = sink.os();
  os << config_echo(cfg) << '\n' << "x,psi,regime,a,b,c_or_c0,c1,d1,d2,ell\n";
  for (std::size_t i = 0; i < xs.size(); ++i) os << num(xs[i]) << ',' << num(psi[i]) << ',' << tail << '\n';
  return kOk;
}

int cmd_sample(const RunConfig& cfg) {
  EnsembleConfig ens;
  ens.n_particles = cfg.n;
  ens.theta = Theta::parse(cfg.theta).value();
  ens.weight = make_weight(cfg, cfg.n);
  ens.proposal_scale = cfg.proposal;
  ens.seed = cfg.seed;
  const int burn_in = cfg.burn_in >= 0 ? cfg.burn_in : cfg.sweeps / 10;
  const ChainResult r = run_chain(ens, cfg.sweeps, burn_in, cfg.thinning);
  Sink sink(cfg);
  auto& os = sink.os();
  os << config_echo(cfg) << '\n';
  os << "# acceptance_rate=" << num(r.acceptance_rate) << " proposal_scale=" << num(r.final_proposal_scale) << '\n';
  os << "row";
  for (int i = 0; i < cfg.n; ++i) os << ",lambda_" << i;
  os << '\n';
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    os << k;
    for (double v : r.samples[k]) os << ',' << num(v);
    os << '\n';
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg) {
  const auto checks = validation_suite(cfg);
  Sink sink(cfg);
  write_report_json(sink.os(), checks);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  return ok ? kOk : kValidationFailure;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw InvalidConfiguration("unknown command '" + command + "'");
  }
  const Theta t = Theta::parse(theta);
  if (!(t.value() >= 1.0)) throw InvalidConfiguration("theta must be >= 1");
  if (weight != "laguerre" && weight != "potential") throw InvalidConfiguration("weight must be laguerre or potential");
  Potential::parse(potential);
  moment_method(moments);
  if (bits < 64) throw InvalidConfiguration("bits must be at least 64");
  if (jmax < 0 || n < 1 || grid < 1 || points < 0) throw InvalidConfiguration("sizes must be positive");
  if (curve_nodes < 64) throw InvalidConfiguration("curve-nodes must be >= 64");
  if (!(xmax > 0) || !(tol > 0) || !(proposal > 0)) throw InvalidConfiguration("xmax, tol and proposal must be positive");
  if (sweeps < 1 || thinning < 1) throw InvalidConfiguration("sweeps and thinning must be positive");
  if ((command == "recurrence" || command == "cd-check") && !t.is_rational()) {
    throw IrrationalTheta(command + " needs theta as an exact fraction a/b");
  }
}

std::string RunConfig::default_output() const {
  if (command == "eq") return "density.csv";
  if (command == "sample") return "samples.csv";
  if (command == "validate") return "validation.json";
  std::string name = command;
  std::replace(name.begin(), name.end(), '-', '_');
  return name + ".csv";
}

std::string config_echo(const RunConfig& c) {
  std::ostringstream os;
  os << "# command=" << c.command << " theta=" << c.theta << " potential=" << c.potential << " weight=" << c.weight
     << " alpha=" << num(c.alpha) << " bits=" << c.bits << " moments=" << c.moments << " jmax=" << c.jmax
     << " n=" << c.n << " grid=" << c.grid << " curve-nodes=" << c.curve_nodes << " c=" << num(c.c)
     << " c0=" << num(c.c0) << " c1=" << num(c.c1) << " xmax=" << num(c.xmax) << " points=" << c.points
     << " tol=" << num(c.tol) << " sweeps=" << c.sweeps << " burn-in=" << c.burn_in << " thinning=" << c.thinning
     << " proposal=" << num(c.proposal) << " seed=" << c.seed;
  return os.str();
}

std::vector<CheckResult> validation_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, double tolerance, const std::function<double()>& value,
                   bool lower_is_better = true) {
    CheckResult r{name, false, NAN, tolerance};
    try {
      r.value = value();
      r.pass = lower_is_better ? r.value <= tolerance : r.value > tolerance;
    } catch (const Error& e) {
      r.pass = false;
    }
    out.push_back(r);
  };
  const PrecisionContext ctx = context(cfg);
  {
    PrecisionGuard guard(ctx);
    for (const char* th : {"2/1", "3/2"}) {
      const Theta theta = Theta::parse(th);
      const auto sys = build_system(Weight::laguerre(), theta, cfg.jmax, ctx);
      const std::string tag = std::string("theta_") + (th[0] == '2' ? "2" : "3_2");
      check("orthogonality_" + tag, 1e-12, [&] { return to_double(verify_orthogonality(sys)); });
      check("recurrence_" + tag, 1e-15, [&] {
        double worst = 0;
        for (int k = 0; k + theta.fraction()->a <= sys.jmax() && k <= 6; ++k) {
          worst = std::max({worst, to_double(recurrence_residual(sys, recurrence_coeffs(sys, k))),
                            to_double(symmetry_residual(sys, k))});
        }
        return worst;
      });
      check("christoffel_darboux_" + tag, 1e-12, [&] {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> coord(0.0, 5.0);
        double worst = 0;
        for (int p = 0; p < 20; ++p) {
          const double x = coord(rng), y = coord(rng);
          for (int n = 1; n - 1 + theta.fraction()->a <= sys.jmax() && n <= 8; ++n) {
            worst = std::max(worst, to_double(verify_cd(sys, n, Real(x), Real(y))));
          }
        }
        return worst;
      });
      check("determinant_oracle_" + tag, 1e-15, [&] {
        double worst = 0;
        for (int j = 0; j <= std::min(8, sys.jmax()); ++j) {
          for (double x : {0.5, 2.0, 4.0}) {
            // Relative to sum |c_k| x^k, which stays meaningful at roots.
            Real scale(0), xp(1);
            for (const Real& ck : sys.p_coeffs()[j]) {
              scale += abs(ck) * xp;
              xp *= x;
            }
            const Real a = eval_poly(sys, Family::p, j, Real(x));
            const Real b = poly_via_determinant(sys.table(), Family::p, j, Real(x));
            worst = std::max(worst, to_double(abs(a - b) / scale));
          }
        }
        return worst;
      });
    }
  }
  const Potential laguerre = Potential::linear(1.0);
  const double c = solve_c(laguerre, 2.0);
  check("laguerre_c", 1e-8, [&] { return std::abs(c - 2.0); });
  const EquilibriumMeasure lag = make_hard_measure(laguerre, 2.0, c);
  check("laguerre_support_edge", 1e-8, [&] { return std::abs(lag.right - 3.0 * std::sqrt(3.0)); });
  check("laguerre_density", 1e-4, [&] {
    double worst = 0;
    for (double x : interior_grid(0.0, lag.right, 50)) {
      worst = std::max(worst, std::abs(lag.density(x) - laguerre_density_closed_form(1.0, x)));
    }
    return worst;
  });
  check("laguerre_mass", 1e-6, [&] { return std::abs(total_mass(lag) - 1.0); });
  check("unit_circle_theta_1", 1e-10, [&] {
    const CurveSamples curve = trace_curve(ConformalMap::hard(1.0, 1.0), cfg.curve_nodes);
    double worst = 0;
    for (double r : curve.radii) worst = std::max(worst, std::abs(r - 1.0));
    return worst;
  });
  check("hard_edge_exponent_theta_2", 0.02, [&] {
    std::vector<double> xs, ys;
    for (double t : log_grid(1e-8, 1e-5, 12)) {
      xs.push_back(t * lag.right);
      ys.push_back(lag.density(xs.back()));
    }
    return std::abs(fitted_exponent(xs, ys) + 1.0 / 3.0);
  });
  const Potential soft_v = Potential::quadratic(1.0, -3.0);
  check("soft_edge_parameters", 1e-6, [&] {
    const EquilibriumMeasure m = classify_edge(soft_v, 2.0);
    if (m.regime != EdgeRegime::SoftEdge) return std::numeric_limits<double>::infinity();
    return std::max(std::abs(m.map.c0() - 1.5), std::abs(m.map.c1() - 2.0 / 3.0));
  });
  check("critical_rho", 0.05, [&] { return std::abs(locate_critical_rho(1.0, 2.0, -3.0, -1.0, 1e-4) + 2.0); });
  check("euler_lagrange_laguerre", 1e-3, [&] {
    return verify_euler_lagrange(lag, interior_grid(0.0, lag.right, 30), {}).max_dev_on_support;
  });
  check(
      "euler_lagrange_exterior_slack", 0.0,
      [&] {
        const double b = lag.right;
        return verify_euler_lagrange(lag, interior_grid(0.0, b, 30), {b + 0.5, 2 * b, 5 * b}).min_slack_off_support;
      },
      false);
  check("inverse_cdf_self_consistency", 0.01, [&] {
    return ks_distance(sample_measure(lag, 100000, cfg.seed), [&](double x) { return lag.cdf(x); });
  });
  return out;
}

void write_report_json(std::ostream& os, const std::vector<CheckResult>& checks) {
  nlohmann::json report = nlohmann::json::array();
  for (const auto& c : checks) {
    report.push_back({{"check_name", c.check_name},
                      {"status", c.pass ? "pass" : "fail"},
                      {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                      {"tolerance", c.tolerance}});
  }
  os << report.dump(2) << '\n';
}

int run(const RunConfig& cfg) {
  cfg.validate();
  const std::string& c = cfg.command;
  if (c == "polys") return cmd_polys(cfg);
  if (c == "recurrence") return cmd_recurrence(cfg);
  if (c == "cd-check") return cmd_cd_check(cfg);
  if (c == "kernel") return cmd_kernel(cfg);
  if (c == "curve") return cmd_curve(cfg);
  if (c == "eq") return cmd_eq(cfg);
  if (c == "sample") return cmd_sample(cfg);
  return cmd_validate(cfg);
}

namespace {

// {"kind": "quadratic", "tau": 1, "rho": -3} and friends, as a flag string.
std::string potential_spec_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<std::string> allowed{"kind"};
  std::string args;
  if (kind == "linear") {
    args = num(j.at("rho").get<double>());
    allowed.push_back("rho");
  } else if (kind == "quadratic") {
    args = num(j.at("tau").get<double>()) + "," + num(j.at("rho").get<double>());
    allowed.insert(allowed.end(), {"tau", "rho"});
  } else if (kind == "polynomial") {
    for (const auto& c : j.at("coeffs")) args += (args.empty() ? "" : ",") + num(c.get<double>());
    allowed.push_back("coeffs");
  } else {
    throw InvalidConfiguration("unknown potential kind '" + kind + "'");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidConfiguration("unexpected potential field '" + key + "'");
    }
  }
  return kind + ":" + args;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Biorthogonal ensembles: polynomials, kernels, equilibrium measures and sampling"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values (flags take precedence)");
  app.add_option("--theta", cfg.theta, "Interaction exponent: a/b, integer or decimal");
  app.add_option("--potential", cfg.potential, "linear:RHO, quadratic:TAU,RHO or polynomial:C0,C1,...");
  app.add_option("--weight", cfg.weight, "laguerre or potential");
  app.add_option("--alpha", cfg.alpha, "Exponent of x in the weight");
  app.add_option("--out", cfg.out, "Output path, '-' for stdout");
  app.add_option("--bits", cfg.bits, "Mantissa bits of the working precision");
  app.add_option("--moments", cfg.moments, "automatic, closed_form or quadrature");
  app.add_option("--jmax", cfg.jmax, "Highest polynomial index");
  app.add_option("--n", cfg.n, "Kernel / CD size, or number of particles");
  app.add_option("--grid", cfg.grid, "Grid points per axis");
  app.add_option("--curve-nodes", cfg.curve_nodes, "Quadrature nodes on the level curve");
  app.add_option("--c", cfg.c, "Hard-edge map parameter for `curve`");
  app.add_option("--c0", cfg.c0, "Soft-edge map parameter c0 for `curve`");
  app.add_option("--c1", cfg.c1, "Soft-edge map parameter c1 for `curve`");
  app.add_option("--xmax", cfg.xmax, "Upper end of sampled x and y");
  app.add_option("--points", cfg.points, "Random points for cd-check");
  app.add_option("--tol", cfg.tol, "Pass threshold for recurrence and cd-check");
  app.add_option("--sweeps", cfg.sweeps, "Total Metropolis sweeps");
  app.add_option("--burn-in", cfg.burn_in, "Burn-in sweeps (default sweeps/10)");
  app.add_option("--thinning", cfg.thinning, "Keep every k-th sweep after burn-in");
  app.add_option("--proposal", cfg.proposal, "Initial random-walk step");
  app.add_option("--seed", cfg.seed, "Random seed");
  for (const auto& name : commands()) app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidConfiguration("cannot read config file '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidConfiguration(std::string("config file is not valid JSON: ") + e.what());
      }
      if (!j.is_object()) throw InvalidConfiguration("config file must hold a JSON object");
      for (const auto& [key, value] : j.items()) {
        if (key == "command") {
          if (cfg.command.empty()) cfg.command = value.get<std::string>();
          continue;
        }
        CLI::Option* opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") throw InvalidConfiguration("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        if (key == "potential" && value.is_object()) {
          opt->add_result(potential_spec_from_json(value));
        } else {
          opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
        }
        opt->run_callback();
      }
    }
    if (cfg.command.empty()) throw InvalidConfiguration("no command given");
    return run(cfg);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "biortho: malformed config value: " << e.what() << '\n';
    return kConfigError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const Error& e) {
    std::cerr << "biortho: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::config:
        return kConfigError;
      case ErrorCategory::solver:
        return kSolverFailure;
      case ErrorCategory::validation:
        return kValidationFailure;
    }
    return kSolverFailure;
  } catch (const CLI::Error& e) {
    std::cerr << "biortho: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace biortho::cli
