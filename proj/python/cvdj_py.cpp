#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvdj/analytic.hpp"
#include "cvdj/errors.hpp"
#include "cvdj/experiments.hpp"
#include "cvdj/grid.hpp"
#include "cvdj/quadrature.hpp"

namespace py = pybind11;
using namespace cvdj;

namespace {

py::dict report_dict(const FisherReport& r) {
  py::dict d;
  d["fisher"] = r.fisher;
  d["status"] = to_string(r.status);
  d["variance_bound"] = r.variance_bound;
  d["mean_bound_f"] = r.mean_bound_diagnostic;
  d["mean_bound_2f"] = r.mean_bound_doubled;
  d["delta_phi"] = r.delta_phi ? py::cast(*r.delta_phi) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(cvdj, m) {
  m.doc() = "Semi-Gaussian continuous-variable phase estimation and Deutsch-Jozsa statistics";

  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<UnidentifiableError>(m, "UnidentifiableError", PyExc_ValueError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  py::class_<ProcedureParams>(m, "ProcedureParams")
      .def(py::init([](double delta, double big_t, double big_p, double x0, std::optional<double> epsilon) {
             return ProcedureParams{x0, delta, big_t, big_p, epsilon};
           }),
           py::arg("delta"), py::arg("big_t"), py::arg("big_p"), py::arg("x0") = 0.0,
           py::arg("epsilon") = py::none())
      .def_static("coherent", &ProcedureParams::coherent, py::arg("big_t"))
      .def_readwrite("x0", &ProcedureParams::x0)
      .def_readwrite("delta", &ProcedureParams::delta)
      .def_readwrite("big_t", &ProcedureParams::big_t)
      .def_readwrite("big_p", &ProcedureParams::big_p)
      .def_readwrite("epsilon", &ProcedureParams::epsilon)
      .def_property_readonly("p_delta", &ProcedureParams::p_delta)
      .def_property_readonly("contained", &ProcedureParams::contained)
      .def("__repr__", [](const ProcedureParams& p) {
        return "ProcedureParams(delta=" + std::to_string(p.delta) + ", big_t=" + std::to_string(p.big_t) +
               ", big_p=" + std::to_string(p.big_p) + ", x0=" + std::to_string(p.x0) + ")";
      });

  py::class_<PiecewiseBinaryFunction>(m, "PiecewiseBinaryFunction")
      .def(py::init<double, std::vector<double>, std::vector<int>>(), py::arg("half_width"), py::arg("breakpoints"),
           py::arg("values"))
      .def_static("step", &PiecewiseBinaryFunction::step, py::arg("r"), py::arg("half_width"))
      .def_static("reflected_step", &PiecewiseBinaryFunction::reflected_step, py::arg("r"), py::arg("half_width"))
      .def_static("hat", &PiecewiseBinaryFunction::hat, py::arg("r1"), py::arg("r2"), py::arg("half_width"))
      .def_static("constant", &PiecewiseBinaryFunction::constant, py::arg("value"), py::arg("half_width"))
      .def("__call__", &PiecewiseBinaryFunction::operator(), py::arg("y"))
      .def_property_readonly("breakpoints", &PiecewiseBinaryFunction::breakpoints)
      .def_property_readonly("values", &PiecewiseBinaryFunction::values)
      .def("measure_of_ones", &PiecewiseBinaryFunction::measure_of_ones)
      .def("__repr__", &PiecewiseBinaryFunction::describe);

  m.def("validate_params", [](const ProcedureParams& p) {
    py::list out;
    for (const auto& i : validate_params(p).issues) {
      const char* sev = i.severity == Severity::kError ? "error" : i.severity == Severity::kWarning ? "warning" : "info";
      out.append(py::make_tuple(sev, i.code, i.message));
    }
    return out;
  });
  m.def("norm_x_sq", &norm_x_sq, py::arg("p"));
  m.def("norm_p_sq", &norm_p_sq, py::arg("p"), py::arg("p0") = 0.0);

  m.def("prob_x0", [](const ProcedureParams& p, double r, double phi) { return prob_x0(p, r, phi).p_x0(); },
        py::arg("p"), py::arg("r"), py::arg("phi"));
  m.def("prob_x0_factorized",
        [](const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi) {
          return prob_x0_factorized(p, f, phi).p_x0();
        },
        py::arg("p"), py::arg("f"), py::arg("phi"));
  m.def("fisher_phi", [](const ProcedureParams& p, double r, double phi) { return report_dict(fisher_phi(p, r, phi)); },
        py::arg("p"), py::arg("r"), py::arg("phi"));
  m.def("fisher_r",
        [](const ProcedureParams& p, double r, double phi) {
          const auto v = fisher_r(p, r, phi);
          return py::make_tuple(v.value, to_string(v.status));
        },
        py::arg("p"), py::arg("r"), py::arg("phi"));
  m.def("generator_moments",
        [](const ProcedureParams& p, double r) {
          const auto g = generator_moments(p, r);
          return py::make_tuple(g.mean, g.variance);
        },
        py::arg("p"), py::arg("r"));
  m.def("delta_phi", &delta_phi, py::arg("p"), py::arg("phi"));
  m.def("dj_statistics", [](const ProcedureParams& p, double r) { return dj_statistics(p, r).p_x0(); }, py::arg("p"),
        py::arg("r"));

  m.def("prob_x0_quadrature",
        [](const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi, double abs_tol,
           int max_subdivisions) {
          const auto q = prob_x0_quadrature(p, f, phi, QuadratureSpec{abs_tol, max_subdivisions});
          return py::make_tuple(q.value, q.error_estimate);
        },
        py::arg("p"), py::arg("f"), py::arg("phi"), py::arg("abs_tol") = 1e-13, py::arg("max_subdivisions") = 1024);
  m.def("step_hat_gap",
        [](const ProcedureParams& p, double phi) {
          const auto g = step_hat_gap(p, phi);
          py::dict d;
          d["signed_gap"] = g.signed_gap;
          d["gap"] = g.gap;
          d["prediction"] = g.leading_order_prediction;
          d["ratio"] = g.ratio ? py::cast(*g.ratio) : py::none();
          return d;
        },
        py::arg("p"), py::arg("phi"));

  m.def("run_circuit",
        [](const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi, std::size_t n, bool truncated) {
          return run_circuit(p, f, phi, n, truncated ? MomentumDomain::kTruncated : MomentumDomain::kExtended).p_x0();
        },
        py::arg("p"), py::arg("f"), py::arg("phi"), py::arg("n") = 4096, py::arg("truncated") = false);
  m.def("aligned_half_domain", &aligned_half_domain, py::arg("big_p"), py::arg("cells_per_p") = 256);
  m.def("kickback_check",
        [](double x, const PiecewiseBinaryFunction& f, std::size_t n_target, double length, int applications) {
          const auto k = two_register_kickback_check(x, f, n_target, length, applications);
          return py::make_tuple(k.phase, k.modulus);
        },
        py::arg("x"), py::arg("f"), py::arg("n_target"), py::arg("target_length") = 2.0,
        py::arg("applications") = 1);

  m.def("replica_seed", &replica_seed, py::arg("master"), py::arg("index"));
  m.def("sample_outcomes",
        [](const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi, std::size_t n, std::uint64_t seed) {
          std::vector<bool> out;
          for (const auto& rec : sample_outcomes(p, f, phi, n, seed)) out.push_back(rec.outcome == Outcome::kX0);
          return out;
        },
        py::arg("p"), py::arg("f"), py::arg("phi"), py::arg("n"), py::arg("seed"));
  m.def("dj_trials",
        [](const ProcedureParams& p, double r, std::size_t trials, std::uint64_t seed) {
          const auto s = dj_trials(p, r, trials, seed);
          py::dict d;
          d["p_x0"] = s.p_x0;
          d["classified_constant"] = s.classified_constant;
          d["classified_balanced"] = s.classified_balanced;
          d["misclassification_rate"] = s.misclassification_rate ? py::cast(*s.misclassification_rate) : py::none();
          d["analytic_constant_error"] = s.analytic_constant_error;
          return d;
        },
        py::arg("p"), py::arg("r"), py::arg("trials"), py::arg("seed"));
  m.def("estimation_study",
        [](const ProcedureParams& p, double r, double phi_true, std::size_t shots, std::size_t replicas,
           std::uint64_t seed) {
          const auto s = estimation_study(p, r, phi_true, shots, replicas, seed);
          py::dict d;
          d["mean_phi_hat"] = s.mean_phi_hat;
          d["empirical_mse"] = s.empirical_mse;
          d["crb"] = s.crb;
          d["exact_mse"] = s.exact_mse;
          return d;
        },
        py::arg("p"), py::arg("r"), py::arg("phi_true"), py::arg("shots"), py::arg("replicas"), py::arg("seed"));
}
