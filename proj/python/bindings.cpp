#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curlcurl/analysis.hpp"
#include "curlcurl/config.hpp"
#include "curlcurl/errors.hpp"
#include "curlcurl/functional.hpp"
#include "curlcurl/grid.hpp"
#include "curlcurl/maxwell.hpp"
#include "curlcurl/model.hpp"
#include "curlcurl/runner.hpp"
#include "curlcurl/solver.hpp"

namespace py = pybind11;
using namespace curlcurl;

namespace {

py::array_t<double> field_values(const Field& u) {
  const CylGrid& g = *u.grid;
  py::array_t<double> out({g.n_r, g.n_s});
  std::copy(u.v.begin(), u.v.end(), out.mutable_data());
  return out;
}

Field field_from_values(const ProblemSpec& spec, py::array_t<double, py::array::c_style> values) {
  Field u(make_grid(spec));
  const CylGrid& g = *u.grid;
  if (values.ndim() != 2 || values.shape(0) != g.n_r || values.shape(1) != g.n_s)
    throw std::invalid_argument("values must have shape (n_r, n_s)");
  std::copy(values.data(), values.data() + g.cells(), u.v.begin());
  return u;
}

py::array_t<double> component(const std::vector<double>& data, const CartGrid3& g) {
  py::array_t<double> out({g.nx, g.ny, g.nz});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nehari-manifold ground states of the singular-potential NLS and "
            "ansatz solutions of the curl-curl problem";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ConvergenceError>(m, "ConvergenceError");
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError");

  py::class_<Potential>(m, "Potential")
      .def_readonly("v0", &Potential::v0)
      .def_readonly("v_inf", &Potential::v_inf)
      .def_readonly("is_constant", &Potential::is_constant)
      .def_readonly("dim_n", &Potential::dim_n)
      .def_readonly("sym_k", &Potential::sym_k)
      .def_readonly("family", &Potential::family)
      .def_readonly("params", &Potential::params)
      .def("shifted", &Potential::shifted)
      .def("__call__", [](const Potential& p, double r, double s) { return p(r, s); });

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def_readonly("p", &Nonlinearity::p)
      .def_readonly("odd", &Nonlinearity::odd)
      .def_readonly("kerr_chi3", &Nonlinearity::kerr_chi3)
      .def_readonly("family", &Nonlinearity::family)
      .def("f", [](const Nonlinearity& n, double u) { return n.f(u); })
      .def("F", [](const Nonlinearity& n, double u) { return n.F(u); });

  m.def("builtin_potential", &builtin_potential, py::arg("name"), py::arg("params"));
  m.def("builtin_nonlinearity", &builtin_nonlinearity, py::arg("name"), py::arg("params"));

  py::class_<Domain>(m, "Domain")
      .def(py::init<>())
      .def(py::init([](double r_max, double s_max) { return Domain{r_max, s_max}; }),
           py::arg("r_max"), py::arg("s_max"))
      .def_readwrite("r_max", &Domain::r_max)
      .def_readwrite("s_max", &Domain::s_max);

  py::class_<Resolution>(m, "Resolution")
      .def(py::init<>())
      .def(py::init([](int n_r, int n_s) { return Resolution{n_r, n_s}; }), py::arg("n_r"),
           py::arg("n_s"))
      .def_readwrite("n_r", &Resolution::n_r)
      .def_readwrite("n_s", &Resolution::n_s);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<>())
      .def_readwrite("potential", &ProblemSpec::potential)
      .def_readwrite("nonlinearity", &ProblemSpec::nonlinearity)
      .def_readwrite("epsilon", &ProblemSpec::epsilon)
      .def_readwrite("domain", &ProblemSpec::domain)
      .def_readwrite("resolution", &ProblemSpec::resolution)
      .def("validate", &ProblemSpec::validate);

  py::class_<Field>(m, "Field")
      .def_property_readonly("values", &field_values)
      .def_property_readonly("n_r", [](const Field& u) { return u.grid->n_r; })
      .def_property_readonly("n_s", [](const Field& u) { return u.grid->n_s; })
      .def_property_readonly("r", [](const Field& u) { return u.grid->r; })
      .def_property_readonly("s", [](const Field& u) { return u.grid->s; });

  m.def("field_from_values", &field_from_values, py::arg("spec"), py::arg("values"));
  m.def("inner_weighted", &inner_weighted);
  m.def("norm_weighted", &norm_weighted);
  m.def("apply_schrodinger_op", &apply_schrodinger_op, py::arg("u"), py::arg("potential"),
        py::arg("epsilon"));
  m.def("solve_linear", &solve_linear, py::arg("potential"), py::arg("epsilon"), py::arg("rhs"),
        py::arg("tol"));
  m.def("write_field", &write_field, py::arg("path"), py::arg("u"));
  m.def("read_field", &read_field, py::arg("path"));

  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("quad", &EnergyBreakdown::quad)
      .def_readonly("nl", &EnergyBreakdown::nl)
      .def_readonly("total", &EnergyBreakdown::total)
      .def_readonly("nehari", &EnergyBreakdown::nehari);

  m.def("energy", py::overload_cast<const Field&, const ProblemSpec&>(&energy));
  m.def("gradient", py::overload_cast<const Field&, const ProblemSpec&>(&gradient));
  m.def("fiber_scale", py::overload_cast<const Field&, const ProblemSpec&>(&fiber_scale));
  m.def("nehari_project", py::overload_cast<const Field&, const ProblemSpec&>(&nehari_project));

  py::class_<LineSearch>(m, "LineSearch")
      .def(py::init<>())
      .def_readwrite("c1", &LineSearch::c1)
      .def_readwrite("shrink", &LineSearch::shrink)
      .def_readwrite("max_backtracks", &LineSearch::max_backtracks)
      .def_readwrite("alpha0", &LineSearch::alpha0);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("grad_tol", &SolverConfig::grad_tol)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("precondition", &SolverConfig::precondition)
      .def_readwrite("line_search", &SolverConfig::line_search)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("init_center_s", &SolverConfig::init_center_s)
      .def_readwrite("init_width", &SolverConfig::init_width)
      .def_readwrite("enforce_nonneg", &SolverConfig::enforce_nonneg)
      .def_readwrite("cg_tol", &SolverConfig::cg_tol)
      .def_readwrite("cg_max_iters", &SolverConfig::cg_max_iters);

  py::class_<Solution>(m, "Solution")
      .def_readonly("u", &Solution::u)
      .def_readonly("energy", &Solution::energy)
      .def_readonly("grad_norm", &Solution::grad_norm)
      .def_readonly("iterations", &Solution::iterations)
      .def_readonly("converged", &Solution::converged)
      .def_readonly("nehari_rel", &Solution::nehari_rel)
      .def_property_readonly("wallclock_s",
                             [](const Solution& s) { return s.wallclock.count(); });

  m.def("initial_guess", &initial_guess, py::arg("spec"), py::arg("center_s"), py::arg("width"));
  m.def("solve_ground_state",
        py::overload_cast<const ProblemSpec&, const SolverConfig&>(&solve_ground_state),
        py::arg("spec"), py::arg("config"));
  m.def("solve_ground_state",
        py::overload_cast<const ProblemSpec&, const SolverConfig&, const Field&>(
            &solve_ground_state),
        py::arg("spec"), py::arg("config"), py::arg("start"));
  m.def("solve_limiting", &solve_limiting, py::arg("k"), py::arg("domain"),
        py::arg("resolution"), py::arg("nonlinearity"), py::arg("config"));

  py::class_<SweepEntry>(m, "SweepEntry")
      .def_readonly("eps", &SweepEntry::eps)
      .def_readonly("solution", &SweepEntry::solution)
      .def_readonly("error", &SweepEntry::error);

  m.def("continuation_sweep", &continuation_sweep, py::arg("spec_template"),
        py::arg("eps_list"), py::arg("config"));

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("nu_est", &DecayFit::nu_est)
      .def_readonly("x_lo", &DecayFit::x_lo)
      .def_readonly("x_hi", &DecayFit::x_hi)
      .def_readonly("r2", &DecayFit::r2)
      .def_readonly("nu_star", &DecayFit::nu_star)
      .def_readonly("n_samples", &DecayFit::n_samples);

  m.def("decay_fit", &decay_fit, py::arg("solution"), py::arg("x_lo"), py::arg("x_hi"));
  m.def("nu_star_for_dimension", &nu_star_for_dimension, py::arg("dim_n"));
  m.def("compare_potentials", &compare_potentials, py::arg("v_hi"), py::arg("v_lo"),
        py::arg("nonlinearity"), py::arg("epsilon"), py::arg("domain"), py::arg("resolution"),
        py::arg("config"));

  py::class_<ContinuityRow>(m, "ContinuityRow")
      .def_readonly("h", &ContinuityRow::h)
      .def_readonly("c", &ContinuityRow::c);
  py::class_<ContinuityTable>(m, "ContinuityTable")
      .def_readonly("c_base", &ContinuityTable::c_base)
      .def_readonly("rows", &ContinuityTable::rows)
      .def_readonly("lipschitz_estimate", &ContinuityTable::lipschitz_estimate)
      .def_readonly("diffs_monotone", &ContinuityTable::diffs_monotone)
      .def_readonly("shifts_ordered", &ContinuityTable::shifts_ordered);

  m.def("continuity_scan", &continuity_scan, py::arg("potential"), py::arg("h_list"),
        py::arg("nonlinearity"), py::arg("epsilon"), py::arg("domain"), py::arg("resolution"),
        py::arg("config"));
  m.def("cutoff_gamma", &cutoff_gamma, py::arg("r_cut"), py::arg("limiting_solution"),
        py::arg("k"));

  py::class_<ConcentrationReport>(m, "ConcentrationReport")
      .def_readonly("eps", &ConcentrationReport::eps)
      .def_readonly("peak_s", &ConcentrationReport::peak_s)
      .def_readonly("mass_center", &ConcentrationReport::mass_center)
      .def_readonly("width", &ConcentrationReport::width)
      .def_readonly("c_eps", &ConcentrationReport::c_eps)
      .def_readonly("profile_count_est", &ConcentrationReport::profile_count_est)
      .def_readonly("ell_bound", &ConcentrationReport::ell_bound)
      .def_readonly("bound_violated", &ConcentrationReport::bound_violated);

  m.def("concentration_scan", &concentration_scan, py::arg("sweep"), py::arg("m_v0"),
        py::arg("m_vinf"));

  py::class_<CartGrid3>(m, "CartGrid3")
      .def_readonly("nx", &CartGrid3::nx)
      .def_readonly("ny", &CartGrid3::ny)
      .def_readonly("nz", &CartGrid3::nz)
      .def_readonly("h", &CartGrid3::h)
      .def("x", &CartGrid3::x)
      .def("y", &CartGrid3::y)
      .def("z", &CartGrid3::z);

  m.def("centered_box", &centered_box, py::arg("n"), py::arg("half"));

  py::enum_<Sampling>(m, "Sampling")
      .value("bilinear", Sampling::bilinear)
      .value("spline", Sampling::spline);

  py::class_<VectorField3>(m, "VectorField3")
      .def_readonly("grid", &VectorField3::grid)
      .def_property_readonly("u1", [](const VectorField3& f) { return component(f.u1, f.grid); })
      .def_property_readonly("u2", [](const VectorField3& f) { return component(f.u2, f.grid); })
      .def_property_readonly("u3", [](const VectorField3& f) { return component(f.u3, f.grid); });

  m.def("reconstruct", &reconstruct, py::arg("u"), py::arg("box"),
        py::arg("sampling") = Sampling::bilinear);
  m.def("reconstruct_profile", &reconstruct_profile, py::arg("profile"), py::arg("box"));
  m.def("divergence",
        [](const VectorField3& U) { return component(divergence(U), U.grid); });
  m.def("curlcurl_residual", &curlcurl_residual, py::arg("U"), py::arg("potential"),
        py::arg("epsilon"), py::arg("nonlinearity"));
  m.def("energy_curl", &energy_curl, py::arg("U"), py::arg("potential"), py::arg("epsilon"),
        py::arg("nonlinearity"));
  m.def("energy_in_box", &energy_in_box, py::arg("u"), py::arg("spec"), py::arg("half"));
  m.def("write_vtk", &write_vtk, py::arg("U"), py::arg("path"), py::arg("field_name") = "U");

  m.def("run_experiment_file", [](const std::string& config_path) {
    return run_experiment(parse_config_file(config_path));
  });
  m.attr("__version__") = kVersion;
}
