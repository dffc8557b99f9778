#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otrates/decomposition.hpp"
#include "otrates/distribution.hpp"
#include "otrates/duals_analysis.hpp"
#include "otrates/measure.hpp"
#include "otrates/rates.hpp"
#include "otrates/solver.hpp"
#include "otrates/stochastics.hpp"

namespace py = pybind11;
using namespace otrates;

namespace {

std::vector<Point> measure_points(const DiscreteMeasure& m) {
  std::vector<Point> out;
  out.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto p = m.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

DistributionSpec dist_from_name(const std::string& kind, py::kwargs kwargs) {
  auto d = [&](const char* key, double fallback) {
    return kwargs.contains(key) ? kwargs[key].cast<double>() : fallback;
  };
  auto z = [&](const char* key, std::size_t fallback) {
    return kwargs.contains(key) ? kwargs[key].cast<std::size_t>() : fallback;
  };
  if (kind == "uniform_cube") return DistributionSpec::uniform_cube(z("d", 1));
  if (kind == "uniform_two_point")
    return DistributionSpec::uniform_two_point(d("x0", 0.0), d("x1", 1.0));
  if (kind == "point_mass") return DistributionSpec::point_mass(d("y", 0.0));
  if (kind == "pareto_radial")
    return DistributionSpec::pareto_radial(d("q", 2.0), z("d", 1));
  if (kind == "pareto_1d") return DistributionSpec::pareto_1d(d("q", 2.0));
  if (kind == "appendixc_mu")
    return DistributionSpec::appendixc_mu(d("alpha", 1.0));
  if (kind == "appendixc_nu")
    return DistributionSpec::appendixc_nu(d("beta", 2.0));
  throw DomainError("unknown distribution kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_otrates, m) {
  m.doc() = "exact discrete optimal transport, layered decompositions, and "
            "Monte-Carlo rate experiments";

  py::register_exception<Error>(m, "OtratesError");

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_static("make", &DiscreteMeasure::make, py::arg("points"),
                  py::arg("weights"))
      .def_property_readonly("dim", &DiscreteMeasure::dim)
      .def_property_readonly("points", &measure_points)
      .def_property_readonly("weights",
                             [](const DiscreteMeasure& m) { return m.weights(); })
      .def("__len__", &DiscreteMeasure::size);

  py::class_<CostSpec>(m, "CostSpec")
      .def_static("euclidean_power",
                  [](double p) { return CostSpec::euclidean_power(p); },
                  py::arg("p"))
      .def_static("absolute_power_1d", &CostSpec::absolute_power_1d,
                  py::arg("p"))
      .def_static(
          "custom_table",
          [](std::vector<std::vector<double>> t) {
            return CostSpec::custom_table(std::move(t));
          },
          py::arg("table"))
      .def("eval",
           [](const CostSpec& c, const Point& x, const Point& y) {
             return c.eval(std::span(x), std::span(y));
           })
      .def("marginal",
           [](const CostSpec& c, const std::string& side, const Point& x) {
             return c.marginal(side == "X" ? Side::X : Side::Y, std::span(x));
           });

  m.def("moment",
        [](const DiscreteMeasure& measure, const CostSpec& cost,
           const std::string& side, double order) {
          return moment(measure, cost, side == "X" ? Side::X : Side::Y,
                        order);
        },
        py::arg("measure"), py::arg("cost"), py::arg("side"),
        py::arg("order"));

  m.def("sample",
        [](const std::string& kind, std::size_t n, std::uint64_t seed,
           py::kwargs kwargs) {
          return sample(dist_from_name(kind, kwargs), n, seed);
        },
        py::arg("kind"), py::arg("n"), py::arg("seed"));

  py::class_<PlanEntry>(m, "PlanEntry")
      .def_readonly("i", &PlanEntry::i)
      .def_readonly("j", &PlanEntry::j)
      .def_readonly("mass", &PlanEntry::mass);

  py::class_<TransportPlan>(m, "TransportPlan")
      .def_readonly("value", &TransportPlan::value)
      .def_readonly("entries", &TransportPlan::entries);

  py::class_<DualPotentials>(m, "DualPotentials")
      .def_readonly("f", &DualPotentials::f)
      .def_readonly("g", &DualPotentials::g);

  m.def("solve_discrete",
        [](const DiscreteMeasure& mu, const DiscreteMeasure& nu,
           const CostSpec& cost) {
          SolveResult result = solve_discrete(mu, nu, cost);
          return py::make_tuple(result.plan, result.duals);
        },
        py::arg("mu"), py::arg("nu"), py::arg("cost"));
  m.def("solve_1d_convex", &solve_1d_convex, py::arg("mu"), py::arg("nu"),
        py::arg("p"));
  m.def("brute_force_assignment", &brute_force_assignment, py::arg("mu"),
        py::arg("nu"), py::arg("cost"));
  m.def("normalize_duals", &normalize_duals, py::arg("duals"),
        py::arg("plan"), py::arg("mu"), py::arg("nu"), py::arg("cost"),
        py::arg("p_hat"));

  m.def("composition_bound", &composition_bound, py::arg("a"), py::arg("b"),
        py::arg("sub_values"), py::arg("radii"));
  m.def("empirical_composite_bound", &empirical_composite_bound,
        py::arg("counts_mu"), py::arg("counts_nu"), py::arg("sub_values"),
        py::arg("radii"), py::arg("n"), py::arg("m"));
  m.def(
      "layer_masses",
      [](const DiscreteMeasure& mu, const DiscreteMeasure& nu,
         const CostSpec& cost) {
        const SolveResult solved = solve_discrete(mu, nu, cost);
        const double offset = default_offset(mu, nu, cost);
        const LayerDecomposition decomp =
            layer_decompose(solved.plan, mu, nu, cost, offset);
        std::vector<std::tuple<int, double, double>> out;
        for (const Layer& layer : decomp.layers)
          out.emplace_back(layer.index, layer.mass, layer.radius);
        return out;
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"),
      "dyadic layer (index, mass, radius) triples of an optimal plan");

  m.def("inverse_binomial_moment_exact",
        [](std::size_t n, double p) {
          const auto r = inverse_binomial_moment_exact(n, p);
          return py::make_tuple(r.exact, r.bound);
        },
        py::arg("n"), py::arg("p"));
  m.def("truncated_inverse_moment",
        [](std::size_t n, double p, double alpha) {
          const auto r = truncated_inverse_moment(n, p, alpha);
          return py::make_tuple(r.estimate, r.bound);
        },
        py::arg("n"), py::arg("p"), py::arg("alpha"));
  m.def("sample_mean_bound", &sample_mean_bound, py::arg("p"), py::arg("n"),
        py::arg("centered_pth"));

  m.def("phi_rate", &phi_rate, py::arg("p"), py::arg("d"), py::arg("n"));
  m.def("predicted_exponent", &predicted_exponent, py::arg("alpha"),
        py::arg("s"));
  m.def("fit_loglog_slope",
        [](const std::vector<std::pair<std::size_t, double>>& pairs) {
          const LogLogFit fit = fit_loglog_slope(pairs);
          return py::make_tuple(fit.slope, fit.intercept, fit.stderr_slope);
        },
        py::arg("pairs"));

  m.def("pareto_tail_slope",
        [](double q, const std::vector<std::size_t>& n_grid, std::size_t reps,
           std::uint64_t seed, std::size_t threads) {
          RateExperiment exp =
              RateExperiment::pareto_tail(q, n_grid, reps, seed);
          exp.threads = threads;
          const RateResult result = run_rate_experiment(exp);
          std::vector<std::pair<std::size_t, double>> per_n;
          for (const RatePoint& p : result.per_n)
            per_n.push_back({p.n, p.mean_abs_dev});
          return py::make_tuple(result.slope, per_n);
        },
        py::arg("q"), py::arg("n_grid"), py::arg("reps"), py::arg("seed"),
        py::arg("threads") = 1,
        "fitted log-log slope of the heavy-tail point-target study");

  m.def("appendixc_transport_map",
        [](double t, double alpha, double beta, int gamma, double p) {
          return appendixc_transport_map(
              t, AppendixCInstance::make(alpha, beta, gamma, p));
        },
        py::arg("t"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
        py::arg("p"));
}
