#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wigbound/app.hpp"
#include "wigbound/dynamics.hpp"
#include "wigbound/io.hpp"

namespace py = pybind11;
using namespace wigbound;

namespace {

// Potentials cross the boundary as polynomial coefficients so worker threads never call back
// into the interpreter.
PotentialFn polynomial(const std::vector<double>& c) {
    if (c.empty()) return {};
    return [c](double x) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    };
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> field_values(const WignerField& F) {
    const auto& g = F.grid();
    py::array_t<double> a({static_cast<py::ssize_t>(g.nx()), static_cast<py::ssize_t>(g.np())});
    std::copy(F.values().begin(), F.values().end(), a.mutable_data());
    return a;
}

py::array_t<double> samples(const Trajectory& t) {
    py::array_t<double> a({static_cast<py::ssize_t>(t.samples.size()), py::ssize_t{3}});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t k = 0; k < t.samples.size(); ++k) {
        m(k, 0) = t.samples[k].t;
        m(k, 1) = t.samples[k].x;
        m(k, 2) = t.samples[k].p;
    }
    return a;
}

py::list report(const BoundaryReport& r) {
    py::list out;
    for (const auto& c : r.checks) {
        py::dict d;
        d["name"] = c.name;
        d["equation"] = c.equation;
        d["measured_max"] = c.measured_max;
        d["tolerance"] = c.tolerance;
        d["pass"] = c.pass;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_wigbound, m) {
    m.doc() = "Wigner functions of a particle confined to an interval";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DomainMismatch>(m, "DomainMismatch");
    py::register_exception<SolverFailure>(m, "SolverFailure");
    py::register_exception<NotPureState>(m, "NotPureState");
    py::register_exception<IntegratorFailure>(m, "IntegratorFailure");

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("hbar"), py::arg("mass"))
        .def_readonly("hbar", &PhysicalParams::hbar)
        .def_readonly("mass", &PhysicalParams::mass);

    py::class_<Domain>(m, "Domain")
        .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
        .def_property_readonly("a", &Domain::a)
        .def_property_readonly("b", &Domain::b)
        .def_property_readonly("length", &Domain::length)
        .def_property_readonly("x0", &Domain::x0);

    py::class_<PhaseSpaceGrid>(m, "PhaseSpaceGrid")
        .def_readonly("domain", &PhaseSpaceGrid::domain)
        .def_property_readonly("x", [](const PhaseSpaceGrid& g) { return to_array(g.x_nodes); })
        .def_property_readonly("p", [](const PhaseSpaceGrid& g) { return to_array(g.p_nodes); });
    m.def("make_phase_grid", &make_phase_grid, py::arg("domain"), py::arg("nx"), py::arg("np"),
          py::arg("p_max"));
    m.def("default_p_max", &default_p_max, py::arg("domain"), py::arg("params") = PhysicalParams{});

    py::class_<SmoothedDelta>(m, "SmoothedDelta")
        .def(py::init<double>(), py::arg("epsilon"))
        .def_property_readonly("epsilon", &SmoothedDelta::epsilon)
        .def_property_readonly("epsilon_prime", &SmoothedDelta::epsilon_prime);
    m.def("delta_eval", &delta_eval, py::arg("delta"), py::arg("x"), py::arg("order") = 0);

    py::class_<Wavefunction>(m, "Wavefunction")
        .def("__call__", &Wavefunction::operator(), py::arg("x"))
        .def("derivative", &Wavefunction::derivative, py::arg("x"))
        .def_property_readonly("domain", &Wavefunction::domain);
    py::class_<WellEigenstate>(m, "WellEigenstate")
        .def_readonly("n", &WellEigenstate::n)
        .def_readonly("L", &WellEigenstate::L)
        .def_readonly("k_n", &WellEigenstate::k_n)
        .def_readonly("E_n", &WellEigenstate::E_n)
        .def("psi", &WellEigenstate::psi, py::arg("x"))
        .def("wavefunction", &WellEigenstate::wavefunction);
    m.def("well_eigenstate", &well_eigenstate, py::arg("n"), py::arg("L"),
          py::arg("params") = PhysicalParams{});
    m.def("superpose", [](const std::vector<std::pair<cplx, Wavefunction>>& t) { return superpose(t); },
          py::arg("terms"));
    m.def("norm_squared", [](const Wavefunction& w) { return norm_squared(w); }, py::arg("psi"));
    m.def("overlap", [](const Wavefunction& a, const Wavefunction& b) { return overlap(a, b); },
          py::arg("phi"), py::arg("psi"));
    m.def("energy_scan",
          [](const Domain& d, double lo, double hi, int n, const std::vector<double>& potential,
             const PhysicalParams& p) {
              std::vector<double> E;
              for (const auto& s : energy_scan(polynomial(potential), d, lo, hi, n, p)) E.push_back(s.E);
              return E;
          },
          py::arg("domain"), py::arg("E_lo"), py::arg("E_hi"), py::arg("samples") = 400,
          py::arg("potential") = std::vector<double>{}, py::arg("params") = PhysicalParams{});

    m.def("solve_bounded",
          [](const Domain& d, double epsilon, int order, double E, double bc_value,
             const std::vector<double>& potential, const PhysicalParams& p) {
              const auto r = solve_bounded_eigenproblem(
                  polynomial(potential), EigenSolveConfig::standard(d, epsilon, order, E, bc_value), d, p);
              return py::make_tuple(to_array(r.x), to_array(r.values));
          },
          py::arg("domain"), py::arg("epsilon"), py::arg("taylor_order"), py::arg("E"),
          py::arg("bc_value"), py::arg("potential") = std::vector<double>{},
          py::arg("params") = PhysicalParams{});

    py::class_<WignerField>(m, "WignerField")
        .def("__call__", &WignerField::operator(), py::arg("x"), py::arg("p"))
        .def_property_readonly("grid", &WignerField::grid)
        .def_property_readonly("values", &field_values)
        .def_property_readonly("provenance", [](const WignerField& F) { return to_string(F.provenance()); });
    m.def("wigner_transform", &wigner_transform, py::arg("psi"), py::arg("grid"),
          py::arg("params") = PhysicalParams{});
    m.def("analytic_well_wigner", &analytic_well_wigner, py::arg("n"), py::arg("L"),
          py::arg("params") = PhysicalParams{}, py::arg("grid") = std::nullopt);
    m.def("combine", &combine, py::arg("terms"));
    m.def("check_consistency", [](const WignerField& F, double tol) { return report(check_consistency(F, tol)); },
          py::arg("field"), py::arg("tolerance") = 1e-8);
    m.def("check_dirichlet_subsidiary",
          [](const WignerField& F, double tol) { return report(check_dirichlet_subsidiary(F, tol)); },
          py::arg("field"), py::arg("tolerance") = 1e-6);
    m.def("check_integral_dirichlet",
          [](const WignerField& F, double tol) { return report(check_integral_dirichlet(F, tol)); },
          py::arg("field"), py::arg("tolerance") = 1e-6);
    m.def("reconstruct_wavefunction", &reconstruct_wavefunction, py::arg("field"),
          py::arg("purity_threshold") = 1e-2);

    m.def("delta_prime_star_closed_form",
          [](const Wavefunction& psi, const std::string& wall, double x, double p, const PhysicalParams& params) {
              return delta_prime_star_closed_form(psi, wall == "a" ? Wall::a : Wall::b, x, p, params);
          },
          py::arg("psi"), py::arg("wall"), py::arg("x"), py::arg("p"), py::arg("params") = PhysicalParams{});
    m.def("delta_prime_star_at",
          [](const WignerField& F, const std::string& wall, double x, double p, double eps_prime) {
              DeltaStarOptions o;
              o.epsilon_prime = eps_prime;
              const bool at_a = wall == "a";
              return delta_prime_star_at(F, at_a ? Wall::a : Wall::b, at_a ? Side::plus : Side::minus,
                                         StarSide::left, x, p, o);
          },
          py::arg("field"), py::arg("wall"), py::arg("x"), py::arg("p"),
          py::arg("epsilon_prime") = DeltaStarOptions{}.epsilon_prime);
    m.def("stargenvalue_residual",
          [](const WignerField& F, double E, const std::vector<double>& potential, bool boundary_terms,
             const PhysicalParams& p) {
              ResidualOptions o;
              o.boundary_terms = boundary_terms;
              return stargenvalue_residual(F, polynomial(potential), E, p, ResidualSide::both, o).sup;
          },
          py::arg("field"), py::arg("E"), py::arg("potential") = std::vector<double>{},
          py::arg("boundary_terms") = true, py::arg("params") = PhysicalParams{});
    m.def("moyal_rhs",
          [](const WignerField& F, const std::vector<double>& potential, const PhysicalParams& p) {
              return moyal_rhs(F, polynomial(potential), p);
          },
          py::arg("field"), py::arg("potential") = std::vector<double>{}, py::arg("params") = PhysicalParams{});
    m.def("phase_space_integral", &phase_space_integral, py::arg("field"));

    m.def("approx_force", &approx_force, py::arg("order"), py::arg("delta"), py::arg("x"),
          py::arg("params") = PhysicalParams{}, py::arg("domain") = Domain(-1.0, 1.0));
    m.def("approx_trajectory",
          [](int order, const SmoothedDelta& D, std::array<double, 2> init, std::array<double, 2> t_span,
             const Domain& d, double rtol, double atol, const PhysicalParams& p) {
              TrajectoryOptions o;
              o.domain = d;
              o.ode.rtol = rtol;
              o.ode.atol = atol;
              const auto t = approx_trajectories(order, D, init, t_span, p, o);
              return py::make_tuple(samples(t), t.escaped);
          },
          py::arg("order"), py::arg("delta"), py::arg("init"), py::arg("t_span"),
          py::arg("domain") = Domain(-1.0, 1.0), py::arg("rtol") = 1e-9, py::arg("atol") = 1e-12,
          py::arg("params") = PhysicalParams{});
    m.def("escape_threshold",
          [](int order, const SmoothedDelta& D, double lo, double hi, const Domain& d, const PhysicalParams& p) {
              TrajectoryOptions o;
              o.domain = d;
              return escape_threshold(order, D, p, o, lo, hi);
          },
          py::arg("order"), py::arg("delta"), py::arg("p_lo"), py::arg("p_hi"),
          py::arg("domain") = Domain(-1.0, 1.0), py::arg("params") = PhysicalParams{});
    m.def("contours",
          [](const WignerField& F, const std::vector<double>& levels) {
              py::list out;
              for (const auto& t : exact_trajectories(F, levels)) {
                  out.append(py::make_tuple(t.level, t.closed, samples(t)));
              }
              return out;
          },
          py::arg("field"), py::arg("levels"));

    m.def("run",
          [](const std::string& command, const std::string& config, const std::string& out) {
              RunConfig cfg = load_config(config);
              if (!out.empty()) cfg.output_dir = out;
              std::ostringstream log;
              const int code = run_command(command, cfg, log);
              return py::make_tuple(code, log.str());
          },
          py::arg("command"), py::arg("config"), py::arg("out") = "");
}
