#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "confspec/cli_report.hpp"
#include "confspec/errors.hpp"
#include "confspec/functionals.hpp"
#include "confspec/inequalities.hpp"
#include "confspec/operator.hpp"
#include "confspec/oracle.hpp"

namespace py = pybind11;
using namespace confspec;

namespace {

// Reports cross the boundary as plain dicts via their JSON form.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

double or_nan(const std::optional<double>& v) { return v ? *v : FamilyParams::kUnset; }

}  // namespace

PYBIND11_MODULE(_confspec, m) {
  m.doc() = "Dirichlet spectra of conformally flat metrics and eigenvalue inequality checks";

  auto base = py::register_exception<Error>(m, "ConfspecError");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<MarginError>(m, "MarginError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ModelMismatch>(m, "ModelMismatch", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<NoRealRoot>(m, "NoRealRoot", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<ConformalFactorModel>(m, "Model")
      .def_static("flat", &ConformalFactorModel::flat, py::arg("dim"))
      .def_static("half_space_power", &ConformalFactorModel::half_space_power, py::arg("dim"), py::arg("t"))
      .def_static("disk_power", &ConformalFactorModel::disk_power, py::arg("dim"), py::arg("t"))
      .def_static("stereographic_sphere", &ConformalFactorModel::stereographic_sphere, py::arg("dim"))
      .def_property_readonly("dim", &ConformalFactorModel::dim)
      .def_property_readonly("name", &ConformalFactorModel::name)
      .def_property_readonly("is_hyperbolic", &ConformalFactorModel::is_hyperbolic)
      .def("f", [](const ConformalFactorModel& self, const Eigen::VectorXd& x) { return self.f(x); })
      .def("grad_f", [](const ConformalFactorModel& self, const Eigen::VectorXd& x) { return self.grad_f(x); })
      .def("laplacian_f", [](const ConformalFactorModel& self, const Eigen::VectorXd& x) { return self.laplacian_f(x); })
      .def("__repr__", [](const ConformalFactorModel& self) { return "<Model " + self.name() + ">"; });

  py::class_<ChartDomain>(m, "Domain")
      .def_static("box", &ChartDomain::box, py::arg("lo"), py::arg("hi"))
      .def_static("ball", &ChartDomain::ball, py::arg("center"), py::arg("radius"))
      .def_static("interval", &ChartDomain::interval, py::arg("a"), py::arg("b"))
      .def_property_readonly("dim", &ChartDomain::dim)
      .def("contains", [](const ChartDomain& self, const Eigen::VectorXd& x) { return self.contains(x); });

  py::class_<SpectralResult>(m, "Spectrum")
      .def_readonly("eigenvalues", &SpectralResult::eigenvalues)
      .def_readonly("eigenvectors", &SpectralResult::eigenvectors)
      .def_readonly("residuals", &SpectralResult::residuals)
      .def_readonly("mass", &SpectralResult::mass)
      .def_readonly("iterations", &SpectralResult::iterations)
      .def_property_readonly("method", [](const SpectralResult& r) { return to_string(r.method); })
      .def_property_readonly("nodes", [](const SpectralResult& r) { return r.grid->positions(); })
      .def_property_readonly("h", [](const SpectralResult& r) { return r.grid->h(); })
      .def("b_orthonormality_error", &b_orthonormality_error);

  m.def(
      "solve",
      [](const ConformalFactorModel& model, const ChartDomain& domain, double h, int k, double tol,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return solve_smallest(assemble(model, build_grid(domain, model, h)), k, tol, seed);
      },
      py::arg("model"), py::arg("domain"), py::arg("h"), py::arg("k"), py::arg("tol") = 1e-8,
      py::arg("seed") = 1, "Smallest k Dirichlet eigenpairs on the lattice of spacing h.");

  m.def(
      "check_sequence",
      [](const std::vector<double>& values, int n, int k, const std::string& family,
         std::optional<double> t, std::optional<double> rho_max, std::optional<double> rho_min,
         std::optional<double> a, std::optional<double> b) {
        FamilyParams p;
        p.t = or_nan(t);
        p.rho_max = or_nan(rho_max);
        p.rho_min = or_nan(rho_min);
        p.a = or_nan(a);
        p.b = or_nan(b);
        return to_python(to_json(check_sequence_inequality(EigenSequence::make(n, values), k, parse_family(family), p)));
      },
      py::arg("values"), py::arg("n"), py::arg("k"), py::arg("family"), py::arg("t") = py::none(),
      py::arg("rho_max") = py::none(), py::arg("rho_min") = py::none(), py::arg("a") = py::none(),
      py::arg("b") = py::none());

  m.def(
      "bound_next_eigenvalue",
      [](const std::vector<double>& values, int n, int k, const std::string& family) {
        return bound_next_eigenvalue(EigenSequence::make(n, values), k, parse_family(family));
      },
      py::arg("values"), py::arg("n"), py::arg("k"), py::arg("family") = "yang");

  m.def("half_space_weighted", [](const SpectralResult& r, double t, int k) {
    return to_python(to_json(check_half_space_weighted(r, t, k)));
  }, py::arg("result"), py::arg("t"), py::arg("k"));
  m.def("radial_weighted", [](const SpectralResult& r, int k, bool specialize_disk) {
    return to_python(to_json(check_radial_weighted(r, k, specialize_disk)));
  }, py::arg("result"), py::arg("k"), py::arg("specialize_disk") = false);
  m.def("coordinate", [](const SpectralResult& r, int p, int k) {
    return to_python(to_json(check_coordinate(r, p, k)));
  }, py::arg("result"), py::arg("p"), py::arg("k"));

  m.def("analytic_box_spectrum", &analytic_box_spectrum, py::arg("n"), py::arg("lengths"), py::arg("count"));
  m.def("hyperbolic_ball_cross_chart", [](int n, double radius) {
    auto balls = hyperbolic_ball_cross_chart(n, radius);
    return py::make_tuple(balls.disk, balls.half_space);
  }, py::arg("n"), py::arg("radius"));
  m.def("weyl_estimate", &weyl_estimate, py::arg("n"), py::arg("volume"), py::arg("k"));
  m.def("riemannian_volume", [](const ConformalFactorModel& model, const ChartDomain& domain, double h) {
    return riemannian_volume(model, *build_grid(domain, model, h));
  }, py::arg("model"), py::arg("domain"), py::arg("h"));

  m.def("run_config", [](const std::string& text) {
    const RunConfig cfg = parse_config_text(text);
    RunOutcome out;
    {
      py::gil_scoped_release release;
      out = run(cfg);
    }
    py::list reports;
    for (const auto& r : out.reports) reports.append(to_python(to_json(r)));
    py::dict d;
    d["exit_code"] = out.exit_code;
    d["reports"] = reports;
    d["files"] = out.files;
    d["oracle"] = out.oracle.kind;
    d["oracle_passed"] = out.oracle.passed;
    return d;
  }, py::arg("config_json"), "Runs a JSON configuration and returns the exit code, reports and written files.");
}
