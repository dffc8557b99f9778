#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "otrates/decomposition.hpp"
#include "otrates/distribution.hpp"
#include "otrates/duals_analysis.hpp"
#include "otrates/error.hpp"
#include "otrates/io.hpp"
#include "otrates/parallel.hpp"
#include "otrates/rates.hpp"
#include "otrates/rng.hpp"
#include "otrates/solver.hpp"
#include "otrates/stochastics.hpp"

namespace fs = std::filesystem;
using namespace otrates;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;  // 0: take the config's seed
  bool seed_overridden = false;
  std::size_t threads = 0;  // 0: available parallelism
  bool plot = false;
};

std::string out_path(const GlobalOptions& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

std::uint64_t resolve_seed(const GlobalOptions& opts, const Config& config) {
  if (opts.seed_overridden) return opts.seed;
  return config.get_u64("seed", 1);
}

std::size_t resolve_threads(const GlobalOptions& opts, const Config& config) {
  if (opts.threads != 0) return opts.threads;
  const long long from_config = config.get_int("threads", 0);
  return from_config > 0 ? std::size_t(from_config) : default_thread_count();
}

CostSpec parse_cost(const Config& config) {
  const std::string kind = config.get_string("cost.kind", "euclidean_power");
  if (kind == "euclidean_power")
    return CostSpec::euclidean_power(config.get_double("cost.p", 1.0));
  if (kind == "absolute_power_1d")
    return CostSpec::absolute_power_1d(config.get_double("cost.p", 1.0));
  if (kind == "custom_table") {
    const CsvTable csv = read_csv(config.get_string("cost.table"));
    std::vector<std::vector<double>> table;
    for (const auto& row : csv.rows) {
      std::vector<double> values;
      for (const auto& cell : row) values.push_back(std::stod(cell));
      table.push_back(std::move(values));
    }
    return CostSpec::custom_table(std::move(table));
  }
  throw ConfigError("unknown cost.kind '" + kind + "'");
}

DistributionSpec parse_dist(const Config& config) {
  const std::string kind = config.get_string("dist.kind");
  if (kind == "uniform_cube")
    return DistributionSpec::uniform_cube(
        std::size_t(config.get_int("dist.d", 1)));
  if (kind == "uniform_two_point")
    return DistributionSpec::uniform_two_point(config.get_double("dist.x0"),
                                               config.get_double("dist.x1"));
  if (kind == "point_mass")
    return DistributionSpec::point_mass(config.get_double("dist.y"));
  if (kind == "pareto_radial")
    return DistributionSpec::pareto_radial(
        config.get_double("dist.q"), std::size_t(config.get_int("dist.d", 1)));
  if (kind == "pareto_1d")
    return DistributionSpec::pareto_1d(config.get_double("dist.q"));
  if (kind == "appendixc_mu")
    return DistributionSpec::appendixc_mu(config.get_double("dist.alpha"));
  if (kind == "appendixc_nu")
    return DistributionSpec::appendixc_nu(config.get_double("dist.beta"));
  throw ConfigError("unknown dist.kind '" + kind + "'");
}

CsvTable key_value_table(const std::string& schema,
                         const std::vector<std::pair<std::string,
                                                     std::string>>& rows) {
  CsvTable table;
  table.schema = schema;
  table.columns = {"key", "value"};
  for (const auto& [k, v] : rows) table.rows.push_back({k, v});
  return table;
}

// ---------------------------------------------------------------- solve --

int cmd_solve(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys(
      {"mu", "nu", "cost.kind", "cost.p", "cost.table", "seed", "threads"});
  const DiscreteMeasure mu = read_measure(config.get_string("mu"));
  const DiscreteMeasure nu = read_measure(config.get_string("nu"));
  const CostSpec cost = parse_cost(config);

  const SolveResult result = solve_discrete(mu, nu, cost);

  CsvTable plan;
  plan.schema = "plan";
  plan.columns = {"i", "j", "mass"};
  for (const PlanEntry& e : result.plan.entries)
    plan.rows.push_back({std::to_string(e.i), std::to_string(e.j),
                         format_double(e.mass)});
  write_csv(out_path(opts, "plan.csv"), plan);

  CsvTable duals;
  duals.schema = "duals";
  duals.columns = {"side", "index", "value"};
  for (std::size_t i = 0; i < result.duals.f.size(); ++i)
    duals.rows.push_back({"f", std::to_string(i),
                          format_double(result.duals.f[i])});
  for (std::size_t j = 0; j < result.duals.g.size(); ++j)
    duals.rows.push_back({"g", std::to_string(j),
                          format_double(result.duals.g[j])});
  write_csv(out_path(opts, "duals.csv"), duals);

  const double dual = dual_value(result.duals, mu, nu);
  write_csv(out_path(opts, "solve_summary.csv"),
            key_value_table(
                "solve-summary",
                {{"primal_value", format_double(result.plan.value)},
                 {"dual_value", format_double(dual)},
                 {"entries", std::to_string(result.plan.entries.size())},
                 {"rows", std::to_string(mu.size())},
                 {"cols", std::to_string(nu.size())}}));

  if (std::abs(result.plan.value - dual) >
      1e-8 * (1.0 + std::abs(result.plan.value)))
    throw ContractViolation("primal and dual values disagree");
  std::cout << "solve: value " << format_double(result.plan.value) << " ("
            << result.plan.entries.size() << " entries)\n";
  return 0;
}

// ------------------------------------------------------------ decompose --

int cmd_decompose(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys({"mu", "nu", "cost.kind", "cost.p", "cost.table",
                              "offset", "n", "m", "seed", "threads"});
  const DiscreteMeasure mu = read_measure(config.get_string("mu"));
  const DiscreteMeasure nu = read_measure(config.get_string("nu"));
  const CostSpec cost = parse_cost(config);
  const std::uint64_t seed = resolve_seed(opts, config);
  const std::size_t n = std::size_t(config.get_int("n", 50));
  const std::size_t m = std::size_t(config.get_int("m", 50));

  const SolveResult solved = solve_discrete(mu, nu, cost);
  const double offset = config.has("offset")
                            ? config.get_double("offset")
                            : default_offset(mu, nu, cost);
  const LayerDecomposition decomp =
      layer_decompose(solved.plan, mu, nu, cost, offset);

  CsvTable table;
  table.schema = "decomposition";
  table.columns = {"layer", "mass", "radius", "i", "j", "entry_mass"};
  for (const Layer& layer : decomp.layers)
    for (const PlanEntry& e : layer.sub_plan.entries)
      table.rows.push_back({std::to_string(layer.index),
                            format_double(layer.mass),
                            format_double(layer.radius),
                            std::to_string(layer.rows[e.i]),
                            std::to_string(layer.cols[e.j]),
                            format_double(e.mass)});
  write_csv(out_path(opts, "decomposition.csv"), table);

  // Reconstruction check: the layered sub-plans must reassemble the plan.
  double worst_reconstruction = 0.0;
  {
    std::vector<double> mass(mu.size() * nu.size(), 0.0);
    for (const Layer& layer : decomp.layers)
      for (const PlanEntry& e : layer.sub_plan.entries)
        mass[layer.rows[e.i] * nu.size() + layer.cols[e.j]] +=
            layer.mass * e.mass;
    for (const PlanEntry& e : solved.plan.entries)
      mass[e.i * nu.size() + e.j] -= e.mass;
    for (const double v : mass)
      worst_reconstruction = std::max(worst_reconstruction, std::abs(v));
  }

  const EmpiricalCompositeReport report =
      empirical_composite_check(decomp, n, m, cost, seed);
  const TwoStageSample sample = two_stage_sample(
      decomp, Side::X, n, derive_stream(seed, {0x1c3, 7}));
  const IpmCheck ipm = ipm_composition_check(decomp, mu, cost, sample, n);

  write_csv(
      out_path(opts, "decompose_summary.csv"),
      key_value_table(
          "decompose-summary",
          {{"layers", std::to_string(decomp.layers.size())},
           {"offset", format_double(offset)},
           {"reconstruction_error", format_double(worst_reconstruction)},
           {"composite_bound", format_double(report.bound)},
           {"exact_pooled", format_double(report.exact_pooled)},
           {"ipm_lhs", format_double(ipm.lhs)},
           {"ipm_rhs", format_double(ipm.rhs)}}));

  if (worst_reconstruction > 1e-12)
    throw ContractViolation("layer decomposition fails to reconstruct");
  if (report.bound < report.exact_pooled - 1e-9)
    throw ContractViolation("composite bound fell below the exact value");
  if (ipm.lhs > ipm.rhs + 1e-9)
    throw ContractViolation("pinned-class composition inequality failed");
  std::cout << "decompose: " << decomp.layers.size()
            << " layers, composite bound " << format_double(report.bound)
            << " >= exact " << format_double(report.exact_pooled) << "\n";
  return 0;
}

// ---------------------------------------------------------------- rates --

int cmd_rates(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys(
      {"setting", "dist.kind", "dist.q", "dist.d", "dist.x0", "dist.x1",
       "dist.y", "dist.alpha", "dist.beta", "target", "target.point",
       "cost.kind", "cost.p", "cost.table", "n_grid", "reps", "m", "seed",
       "threads", "reference.kind", "reference.value", "reference.factor",
       "slope.expected", "slope.min", "slope.max", "name"});

  RateExperiment exp;
  const std::string setting = config.get_string("setting");
  const std::vector<std::size_t> n_grid = config.get_sizes("n_grid");
  const std::size_t reps = std::size_t(config.get_int("reps"));
  const std::uint64_t seed = resolve_seed(opts, config);

  if (setting == "pareto_tail") {
    exp = RateExperiment::pareto_tail(config.get_double("dist.q"), n_grid,
                                      reps, seed);
  } else if (setting == "two_sample_equal") {
    exp = RateExperiment::two_sample_equal(parse_dist(config),
                                           parse_cost(config), n_grid, reps,
                                           seed);
  } else if (setting == "semi_discrete_target") {
    DiscreteMeasure target = dirac(0.0);
    if (config.has("target"))
      target = read_measure(config.get_string("target"));
    else
      target = dirac(config.get_double("target.point"));
    exp = RateExperiment::semi_discrete(
        parse_dist(config), target, parse_cost(config),
        std::numeric_limits<double>::quiet_NaN(), n_grid, reps, seed);
  } else {
    throw ConfigError("unknown setting '" + setting + "'");
  }

  const std::string ref_kind = config.get_string("reference.kind", "");
  if (ref_kind == "zero") exp.reference = RateExperiment::ReferenceKind::Zero;
  if (ref_kind == "large_sample") {
    exp.reference = RateExperiment::ReferenceKind::LargeSample;
    exp.large_sample_factor =
        std::size_t(config.get_int("reference.factor", 50));
  }
  if (config.has("reference.value"))
    exp.reference_value = config.get_double("reference.value");
  if (config.has("m")) exp.fixed_m = std::size_t(config.get_int("m"));
  exp.threads = resolve_threads(opts, config);

  const RateResult result = run_rate_experiment(exp);

  CsvTable table;
  table.schema = "rates";
  table.columns = {"n", "mean_abs_dev", "std_error"};
  for (const RatePoint& point : result.per_n)
    table.rows.push_back({std::to_string(point.n),
                          format_double(point.mean_abs_dev),
                          format_double(point.std_error)});
  write_csv(out_path(opts, "rates.csv"), table);

  const double expected =
      config.get_double("slope.expected",
                        std::numeric_limits<double>::quiet_NaN());
  bool pass = result.slope_defined;
  if (pass && config.has("slope.min"))
    pass = result.slope >= config.get_double("slope.min");
  if (pass && config.has("slope.max"))
    pass = result.slope <= config.get_double("slope.max");

  std::vector<std::pair<std::string, std::string>> summary = {
      {"slope", format_double(result.slope)},
      {"slope_stderr", format_double(result.slope_stderr)},
      {"intercept", format_double(result.intercept)},
      {"slope_defined", result.slope_defined ? "1" : "0"},
      {"predicted_exponent", format_double(expected)},
      {"pass", pass ? "1" : "0"}};
  for (const std::size_t n : result.excluded)
    summary.push_back({"excluded_n", std::to_string(n)});
  write_csv(out_path(opts, "rates_summary.csv"),
            key_value_table("rates-summary", summary));

  if (opts.plot) {
    std::vector<std::pair<double, double>> points;
    for (const RatePoint& point : result.per_n)
      if (point.mean_abs_dev > 0)
        points.push_back({double(point.n), point.mean_abs_dev});
    if (!points.empty())
      write_loglog_svg(out_path(opts, "rates.svg"), points, result.slope,
                       result.intercept,
                       std::isnan(expected) ? result.slope : expected,
                       config.get_string("name", "rate experiment"));
  }

  std::cout << "rates: slope " << format_double(result.slope) << " (stderr "
            << format_double(result.slope_stderr) << ")\n";
  if (!pass)
    throw ContractViolation("fitted slope outside the configured band");
  return 0;
}

// ----------------------------------------------------------- stochastics --

int cmd_stochastics(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys({"seed", "threads", "draws", "reps"});
  const std::uint64_t seed = resolve_seed(opts, config);
  const std::size_t draws = std::size_t(config.get_int("draws", 50));
  const std::size_t reps = std::size_t(config.get_int("reps", 10'000));

  CsvTable table;
  table.schema = "stochastics";
  table.columns = {"check", "estimate", "bound", "pass"};
  bool all_pass = true;
  auto add_row = [&](const std::string& name, double estimate, double bound,
                     bool pass) {
    table.rows.push_back({name, format_double(estimate),
                          format_double(bound), pass ? "1" : "0"});
    all_pass = all_pass && pass;
  };

  // closed form vs the 1/(np) bound
  {
    Rng rng(derive_stream(seed, {1}));
    for (std::size_t k = 0; k < draws; ++k) {
      const std::size_t n = 1 + std::size_t(rng.uniform01() * 30);
      const double p = 0.05 + 0.9 * rng.uniform01();
      const auto moment = inverse_binomial_moment_exact(n, p);
      add_row("inverse_binomial_n" + std::to_string(n), moment.exact,
              moment.bound, moment.exact <= moment.bound + 1e-12);
    }
  }
  // truncated inverse moments
  {
    Rng rng(derive_stream(seed, {2}));
    for (std::size_t k = 0; k < draws; ++k) {
      const std::size_t n = 2 + std::size_t(rng.uniform01() * 500);
      const double p = 0.05 + 0.9 * rng.uniform01();
      const double alpha = 0.05 + 0.9 * rng.uniform01();
      const auto res = truncated_inverse_moment(n, p, alpha);
      add_row("truncated_inverse_n" + std::to_string(n), res.estimate,
              res.bound, res.estimate <= res.bound + 1e-9);
    }
  }
  // sample-mean deviation vs the moment bound (Pareto draws, p < q)
  {
    Rng rng(derive_stream(seed, {3}));
    for (std::size_t k = 0; k < draws; ++k) {
      const double q = 1.3 + 1.5 * rng.uniform01();
      const double p = 1.0 + (std::min(2.0, q) - 1.0) * (0.3 + 0.6 * rng.uniform01());
      const std::size_t n = 10 + std::size_t(rng.uniform01() * 200);
      const DistributionSpec dist = DistributionSpec::pareto_1d(q);
      const double mean = q / (q - 1.0);
      // centered p-th moment by Monte-Carlo on a large fixed sample
      const DiscreteMeasure probe =
          sample(dist, 200'000, derive_stream(seed, {30, k}));
      double centered = 0.0;
      for (std::size_t i = 0; i < probe.size(); ++i)
        centered += std::pow(std::abs(probe.value1d(i) - mean), p);
      centered /= double(probe.size());
      const double bound = sample_mean_bound(p, n, centered);
      double dev = 0.0;
      const std::size_t mc = std::max<std::size_t>(reps / 10, 200);
      for (std::size_t r = 0; r < mc; ++r) {
        const DiscreteMeasure s =
            sample(dist, n, derive_stream(seed, {31, k, r}));
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) acc += s.value1d(i);
        dev += std::abs(acc / double(n) - mean);
      }
      dev /= double(mc);
      add_row("sample_mean_q" + format_double(q), dev, bound, dev <= bound);
    }
  }
  // multinomial weighted L1 deviation vs the envelope bound
  {
    Rng rng(derive_stream(seed, {4}));
    for (std::size_t k = 0; k < draws; ++k) {
      const std::size_t L = 2 + std::size_t(rng.uniform01() * 5);
      std::vector<double> a(L), b(L), c(L);
      double total = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        a[l] = std::pow(2.0, -double(l)) * (0.5 + rng.uniform01());
        total += a[l];
      }
      for (double& v : a) v /= total;
      std::sort(a.rbegin(), a.rend());
      for (std::size_t l = 0; l < L; ++l) {
        const double slack = a[l] * (1.0 + rng.uniform01());
        b[l] = l == 0 ? slack : std::max(a[l], std::min(b[l - 1], slack));
        c[l] = 0.5 + 3.0 * rng.uniform01();
      }
      const std::size_t n = 50 + std::size_t(rng.uniform01() * 400);
      const double gamma = 0.1 + 0.4 * rng.uniform01();
      const EnvelopeSequence env = make_envelope(b, a, n);
      const auto res = multinomial_l1_deviation(a, c, env, gamma, n, reps,
                                                derive_stream(seed, {40, k}));
      add_row("multinomial_L" + std::to_string(L), res.mc_estimate,
              res.bound,
              res.mc_estimate <= res.bound + 3.0 * res.mc_std_error);
    }
  }

  write_csv(out_path(opts, "stochastics.csv"), table);
  std::cout << "stochastics: " << table.rows.size() << " checks\n";
  if (!all_pass) throw ContractViolation("a stochastic bound was violated");
  return 0;
}

// ---------------------------------------------------------------- duals --

int cmd_duals(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys(
      {"seed", "threads", "instances", "p", "epsilons"});
  const std::uint64_t seed = resolve_seed(opts, config);
  const std::size_t instances = std::size_t(config.get_int("instances", 100));
  const double p = config.get_double("p", 2.0);

  CsvTable table;
  table.schema = "duals";
  table.columns = {"check", "lhs", "rhs", "pass"};
  bool all_pass = true;
  auto add_row = [&](const std::string& name, double lhs, double rhs,
                     bool pass) {
    table.rows.push_back(
        {name, format_double(lhs), format_double(rhs), pass ? "1" : "0"});
    all_pass = all_pass && pass;
  };

  // random-instance duality gap and dual moment bound
  Rng rng(derive_stream(seed, {7}));
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t n = 2 + std::size_t(rng.uniform01() * 18);
    const std::size_t m = 2 + std::size_t(rng.uniform01() * 18);
    std::vector<double> xs(n), ys(m), wx(n), wy(m);
    for (auto& v : xs) v = 4.0 * rng.uniform01() - 2.0;
    for (auto& v : ys) v = 4.0 * rng.uniform01() - 2.0;
    double sx = 0.0, sy = 0.0;
    for (auto& v : wx) sx += (v = 0.1 + rng.uniform01());
    for (auto& v : wy) sy += (v = 0.1 + rng.uniform01());
    for (auto& v : wx) v /= sx;
    for (auto& v : wy) v /= sy;
    const DiscreteMeasure mu = DiscreteMeasure::make_flat(1, xs, wx);
    const DiscreteMeasure nu = DiscreteMeasure::make_flat(1, ys, wy);
    const double cost_p = rng.uniform01() < 0.5 ? 1.0 : 2.0;
    const CostSpec cost = CostSpec::euclidean_power(cost_p);
    const SolveResult solved = solve_discrete(mu, nu, cost);
    const double dual = dual_value(solved.duals, mu, nu);
    add_row("duality_gap_" + std::to_string(k), solved.plan.value, dual,
            std::abs(solved.plan.value - dual) <=
                1e-8 * (1.0 + std::abs(solved.plan.value)));
    const DualPotentials normalized =
        normalize_duals(solved.duals, solved.plan, mu, nu, cost, p);
    const DualMomentCheck moments =
        dual_moment_check(normalized, mu, nu, cost, p);
    add_row("dual_moment_" + std::to_string(k), moments.lhs, moments.rhs,
            moments.lhs <= moments.rhs);
  }

  // Heavy-tail instance: growth exponent and truncated moment integrals.
  const AppendixCInstance inst = AppendixCInstance::preset_for(p);
  std::vector<double> eps = config.has("epsilons")
                                ? config.get_doubles("epsilons")
                                : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4,
                                                      1e-5, 1e-6};
  const std::vector<double> partials =
      appendixc_divergence_diagnostic(inst, p, eps);
  CsvTable growth;
  growth.schema = "dual-tail";
  growth.columns = {"epsilon", "partial_integral"};
  for (std::size_t k = 0; k < eps.size(); ++k)
    growth.rows.push_back(
        {format_double(eps[k]), format_double(partials[k])});
  write_csv(out_path(opts, "dual_tail.csv"), growth);

  std::vector<double> grid;
  for (double t = 1e-2; t >= 1e-6; t /= 2.0) grid.push_back(1.0 - t);
  const std::vector<double> f = appendixc_potential(grid, inst);
  CsvTable pot;
  pot.schema = "dual-potential";
  pot.columns = {"one_minus_t", "abs_f"};
  std::vector<std::pair<double, double>> logpairs;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    pot.rows.push_back({format_double(1.0 - grid[k]),
                        format_double(std::abs(f[k]))});
    logpairs.push_back({1.0 - grid[k], std::abs(f[k])});
  }
  write_csv(out_path(opts, "dual_potential.csv"), pot);
  // slope of log |f| against log (1-t)
  double mx = 0, my = 0;
  for (auto& [x, y] : logpairs) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= double(logpairs.size());
  my /= double(logpairs.size());
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : logpairs) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(y) - my);
  }
  const double growth_slope = sxy / sxx;
  add_row("potential_growth_exponent", growth_slope,
          inst.potential_growth_exponent(),
          std::abs(growth_slope - inst.potential_growth_exponent()) <= 0.1);
  for (std::size_t k = 1; k < partials.size(); ++k) {
    const bool monotone = partials[k] > partials[k - 1];
    add_row("partial_integral_monotone_" + std::to_string(k), partials[k - 1],
            partials[k], monotone);
  }

  write_csv(out_path(opts, "duals.csv"), table);
  std::cout << "duals: " << table.rows.size() << " checks\n";
  if (!all_pass) throw ContractViolation("a dual diagnostic failed");
  return 0;
}

// --------------------------------------------------------------- report --

int cmd_report(const GlobalOptions& opts) {
  const Config config = Config::parse_file(opts.config_path);
  config.reject_unknown_keys({"inputs", "seed", "threads"});
  std::vector<std::string> inputs;
  {
    std::istringstream stream(config.get_string("inputs"));
    std::string token;
    while (stream >> token) inputs.push_back(token);
  }

  CsvTable summary;
  summary.schema = "report";
  summary.columns = {"source", "n", "mean_abs_dev", "std_error"};
  for (const std::string& input : inputs) {
    const CsvTable table = read_csv(input);
    if (table.schema != "rates")
      throw ConfigError("input '" + input + "' is not a rates csv");
    std::vector<std::pair<double, double>> points;
    for (const auto& row : table.rows) {
      summary.rows.push_back({input, row[0], row[1], row[2]});
      points.push_back({std::stod(row[0]), std::stod(row[1])});
    }
    if (opts.plot && !points.empty()) {
      // refit from the artifact so plots are reproducible from files alone
      std::vector<std::pair<std::size_t, double>> pairs;
      for (auto& [x, y] : points)
        if (y > 0) pairs.push_back({std::size_t(x), y});
      double slope = 0, intercept = 0;
      if (pairs.size() >= 2) {
        const LogLogFit fit = fit_loglog_slope(pairs);
        slope = fit.slope;
        intercept = fit.intercept;
      }
      const std::string name =
          fs::path(input).stem().string() + ".svg";
      write_loglog_svg(out_path(opts, name), points, slope, intercept, slope,
                       fs::path(input).stem().string());
    }
  }
  write_csv(out_path(opts, "report.csv"), summary);
  std::cout << "report: " << inputs.size() << " inputs aggregated\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal transport rate experiments"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "experiment config file");
  app.add_option("--out", opts.out_dir, "output directory");
  auto* seed_opt =
      app.add_option("--seed", opts.seed, "override the config seed");
  app.add_option("--threads", opts.threads,
                 "worker threads (default: available parallelism)");
  app.add_flag("--plot", opts.plot, "emit SVG plots");

  int (*handler)(const GlobalOptions&) = nullptr;
  for (const auto& [name, fn, desc] :
       {std::tuple{"solve", &cmd_solve, "exact plan, duals, and value"},
        std::tuple{"decompose", &cmd_decompose,
                   "layer decomposition and composition checks"},
        std::tuple{"rates", &cmd_rates, "Monte-Carlo rate experiment"},
        std::tuple{"stochastics", &cmd_stochastics,
                   "auxiliary probabilistic bounds"},
        std::tuple{"duals", &cmd_duals, "dual potential diagnostics"},
        std::tuple{"report", &cmd_report, "aggregate result CSVs"}}) {
    auto* sub = app.add_subcommand(name, desc);
    auto* fn_copy = fn;
    sub->callback([&handler, fn_copy] { handler = fn_copy; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  opts.seed_overridden = seed_opt->count() > 0;
  if (opts.config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return 1;
  }

  try {
    return handler(opts);
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
