#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "ridgeboost/audit.hpp"
#include "ridgeboost/boost.hpp"
#include "ridgeboost/commands.hpp"
#include "ridgeboost/error.hpp"
#include "ridgeboost/regress.hpp"
#include "ridgeboost/riesz.hpp"
#include "ridgeboost/sim.hpp"

namespace py = pybind11;
using namespace ridgeboost;

namespace {

py::dict to_dict(const PointEstimate& e) {
  py::dict d;
  d["label"] = e.label;
  d["theta_hat"] = e.theta_hat;
  d["std_error"] = e.std_error;
  d["ci_low"] = e.ci_low;
  d["ci_high"] = e.ci_high;
  d["n_source"] = e.n_source;
  d["n_target"] = e.n_target;
  d["mae_before"] = e.mae_before;
  d["mae_after"] = e.mae_after;
  d["equivalence_residual"] = e.equivalence_residual;
  d["v_plugin"] = e.v_plugin;
  d["theta_init"] = e.theta_init;
  return d;
}

VarianceResiduals residuals_from(const std::string& s) {
  if (s == "initial") return VarianceResiduals::Initial;
  if (s == "boosted") return VarianceResiduals::Boosted;
  throw Error(ErrorKind::InvalidParameter, "residuals must be 'initial' or 'boosted'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ridge boosting, Riesz regression and plug-in estimation";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Kernel>(m, "Kernel")
      .def_static("rbf", &Kernel::rbf, py::arg("bandwidth"))
      .def_static("linear", &Kernel::linear)
      .def_static("polynomial", &Kernel::polynomial, py::arg("degree"), py::arg("offset"))
      .def("__call__",
           [](const Kernel& k, const Vector& x, const Vector& y) {
             return k(x.transpose(), y.transpose());
           })
      .def("__repr__", &Kernel::describe);

  py::class_<FeatureMap>(m, "FeatureMap")
      .def_static("identity", &FeatureMap::identity, py::arg("input_dim"))
      .def_static("polynomial", &FeatureMap::polynomial, py::arg("input_dim"), py::arg("degree"),
                  py::arg("include_bias") = true)
      .def_static("polynomial_kernel", &FeatureMap::polynomial_kernel, py::arg("input_dim"),
                  py::arg("degree"), py::arg("offset"))
      .def_static("rff", &sample_rff, py::arg("bandwidth"), py::arg("input_dim"),
                  py::arg("num_features"), py::arg("seed"))
      .def_property_readonly("output_dim", &FeatureMap::output_dim)
      .def("apply", &FeatureMap::apply)
      .def("__repr__", &FeatureMap::describe);

  m.def("gram", py::overload_cast<const Kernel&, const Matrix&, const Matrix&>(&gram));

  py::class_<LinearFunctional>(m, "Functional")
      .def(py::init([](Matrix anchors, Vector weights, std::string label) {
             return make_functional(std::move(anchors), std::move(weights), std::move(label));
           }),
           py::arg("anchors"), py::arg("weights"), py::arg("label") = "custom")
      .def_readonly("anchors", &LinearFunctional::anchors)
      .def_readonly("weights", &LinearFunctional::weights)
      .def_readonly("label", &LinearFunctional::label)
      .def_readonly("n_units", &LinearFunctional::n_units)
      .def("__call__",
           [](const LinearFunctional& f, const py::function& predictor) {
             return eval_functional(f, [&](const Matrix& x) { return predictor(x).cast<Vector>(); });
           })
      .def("on_features", [](const LinearFunctional& f, const FeatureMap& map) {
        return functional_on_features(f, map);
      });

  m.def("missing_mean", &missing_mean_functional, py::arg("x_target"));
  m.def(
      "average_derivative",
      [](const Matrix& x, Eigen::Index j, double h) {
        if (h <= 0.0) h = default_diff_step(x, j);
        return average_derivative_functional(x, DiffSpec{j, h});
      },
      py::arg("x"), py::arg("coordinate") = 0, py::arg("step") = 0.0);
  m.def("counterfactual_mean", &counterfactual_mean_functional, py::arg("x"), py::arg("coordinate"),
        py::arg("value"));

  m.def(
      "fit_ridge_primal",
      [](const Matrix& phi, const Vector& z, double lam) { return fit_ridge_primal(phi, z, lam).beta; },
      py::arg("phi"), py::arg("z"), py::arg("lam"));
  m.def(
      "fit_ridge_dual",
      [](const Matrix& k, const Vector& z, double lam) { return fit_ridge_dual(k, z, lam).coeffs; },
      py::arg("gram"), py::arg("z"), py::arg("lam"));
  m.def(
      "fit_riesz_primal",
      [](const Matrix& phi, const Vector& theta_phi, double lam) {
        return fit_riesz_primal(phi, theta_phi, lam).eta;
      },
      py::arg("phi"), py::arg("theta_phi"), py::arg("lam"));
  m.def("check_equivalence", &check_equivalence, py::arg("phi"), py::arg("z"),
        py::arg("theta_phi"), py::arg("lam"));
  m.def("sample_mae", &sample_mae, py::arg("phi"), py::arg("residuals"));
  m.def("contraction_factor", &contraction_factor, py::arg("phi"), py::arg("lam"));

  py::class_<BoostModel>(m, "BoostModel")
      .def_property_readonly("lam", &BoostModel::lambda)
      .def_property_readonly("n_train", &BoostModel::n_train)
      .def_property_readonly("mae_before", &BoostModel::mae_before)
      .def_property_readonly("mae_after", &BoostModel::mae_after)
      .def("predict", &BoostModel::predict)
      .def("predict_init", &BoostModel::predict_init)
      .def("audit", [](const BoostModel& model) {
        const auto r = audit(model);
        py::dict d;
        d["mae_init"] = r.mae_init;
        d["mae_boosted"] = r.mae_boosted;
        d["contraction_factor"] = r.contraction_factor;
        d["eigenvalues"] = r.eigenvalues;
        d["bound_holds"] = r.bound_holds;
        return d;
      });

  m.def(
      "fit_boost",
      [](const Matrix& x, const Vector& y, const py::object& basis, double lam,
         std::optional<double> init_lambda, std::optional<Kernel> init_kernel) {
        BoostBasis b = py::isinstance<Kernel>(basis) ? BoostBasis(basis.cast<Kernel>())
                                                     : BoostBasis(basis.cast<FeatureMap>());
        Predictor init = zero_predictor();
        if (init_lambda) {
          const Kernel k = init_kernel ? *init_kernel
                           : std::holds_alternative<Kernel>(b)
                               ? std::get<Kernel>(b)
                               : throw Error(ErrorKind::InvalidParameter,
                                             "init_kernel is required with a feature-map basis");
          init = make_predictor(fit_ridge_dual(k, x, y, *init_lambda));
        }
        return fit_boost(x, y, std::move(init), b, lam);
      },
      py::arg("x"), py::arg("y"), py::arg("basis"), py::arg("lam"),
      py::arg("init_lambda") = py::none(), py::arg("init_kernel") = py::none(),
      "Kernel ridge init (when init_lambda is given, else zero) boosted once on the basis.");

  m.def(
      "estimate",
      [](const BoostModel& model, const LinearFunctional& theta, const std::string& residuals) {
        EstimateOptions opts;
        opts.residuals = residuals_from(residuals);
        return to_dict(estimate(model, theta, opts));
      },
      py::arg("model"), py::arg("functional"), py::arg("residuals") = "initial");
  m.def(
      "profile",
      [](const BoostModel& model, const std::vector<LinearFunctional>& family) {
        py::list out;
        for (const auto& e : profile(model, family)) {
          auto d = to_dict(e.estimate);
          d["status"] = e.status;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("family"));

  m.def(
      "draw_dataset",
      [](double mu, Eigen::Index n, std::uint64_t seed) {
        sim::DgpConfig cfg;
        cfg.mu = mu;
        cfg.n = n;
        cfg.seed = seed;
        const auto d = sim::draw_dataset(cfg, true);
        return py::make_tuple(d.x, *d.y);
      },
      py::arg("mu"), py::arg("n"), py::arg("seed"));
  m.def(
      "true_average_derivative",
      [](double mu, std::uint64_t draws, std::uint64_t seed) {
        const auto t = sim::true_average_derivative(mu, draws, seed);
        return py::make_tuple(t.value, t.std_error);
      },
      py::arg("mu"), py::arg("draws") = 1'000'000, py::arg("seed") = 271828);

  m.def(
      "run_equivalence_suite",
      [](int instances, std::uint64_t seed) {
        const auto s = cli::run_equivalence_suite(instances, seed);
        py::dict d;
        d["instances"] = s.cases.size();
        d["failures"] = s.failures;
        d["max_discrepancy"] = s.max_discrepancy;
        d["max_ratio"] = s.max_ratio;
        return d;
      },
      py::arg("instances") = 100, py::arg("seed") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"ridgeboost"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
