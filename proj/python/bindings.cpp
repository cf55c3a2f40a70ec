#include "sisctl/certificates.hpp"
#include "sisctl/dynamics.hpp"
#include "sisctl/equilibrium.hpp"
#include "sisctl/graph.hpp"
#include "sisctl/scenario.hpp"
#include "sisctl/serialize.hpp"
#include "sisctl/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace sisctl;

namespace {

// Python sees reports as plain dicts built from the JSON form.
py::object as_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

ControlPolicy policy_from_name(const std::string& name)
{
    if (name == "none")
        return ControlPolicy::none();
    if (name == "linear_distancing")
        return ControlPolicy::linear_distancing();
    throw Error(ErrorKind::ConfigParse, "policy must be \"none\" or \"linear_distancing\"");
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Networked SIS epidemic model with distancing control";

    // The message starts with the error kind, e.g. "NonPositiveRate: ..."
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::class_<EpidemicParams>(m, "EpidemicParams")
        .def(py::init([](double beta, double gamma, double dt) { return EpidemicParams{beta, gamma, dt}; }),
             py::arg("beta"), py::arg("gamma"), py::arg("dt"))
        .def_readwrite("beta", &EpidemicParams::beta)
        .def_readwrite("gamma", &EpidemicParams::gamma)
        .def_readwrite("dt", &EpidemicParams::dt)
        .def_property_readonly("r0", &EpidemicParams::r0)
        .def("validate", &EpidemicParams::validate);

    py::class_<EpidemicNetwork>(m, "Network")
        .def(py::init<Matrix>(), py::arg("weights"))
        .def_property_readonly("weights", &EpidemicNetwork::weights)
        .def_property_readonly("size", &EpidemicNetwork::size)
        .def_property_readonly("irreducible", &EpidemicNetwork::irreducible)
        .def_property_readonly("row_stochastic", &EpidemicNetwork::row_stochastic)
        .def_property_readonly("strong_diagonal", &EpidemicNetwork::strong_diagonal);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("length", &Trajectory::length)
        .def_property_readonly("steps", &Trajectory::steps)
        .def_property_readonly("stop_reason",
                               [](const Trajectory& t) { return std::string(to_string(t.stop_reason())); })
        .def("state", [](const Trajectory& t, std::size_t k) { return Vector(t.state(k)); }, py::arg("k"))
        .def("final_state", [](const Trajectory& t) { return Vector(t.final_state()); })
        .def("states", [](const Trajectory& t) {
            Matrix out(static_cast<Eigen::Index>(t.length()), t.agents());
            for (std::size_t k = 0; k < t.length(); ++k)
                out.row(static_cast<Eigen::Index>(k)) = t.state(k).transpose();
            return out;
        });

    m.def("generate_geometric_network", &generate_geometric_network, py::arg("n"), py::arg("radius"),
          py::arg("area_side"), py::arg("seed"));
    m.def("is_strongly_connected", py::overload_cast<const Matrix&>(&is_strongly_connected), py::arg("weights"));
    m.def("validate_assumptions",
          [](const EpidemicNetwork& n, const EpidemicParams& p, const Vector& x0) {
              return as_python(to_json(validate_assumptions(n, p, x0)));
          },
          py::arg("network"), py::arg("params"), py::arg("x0"));

    m.def("step_basic", &step_basic, py::arg("x"), py::arg("network"), py::arg("params"));
    m.def("step_controlled",
          [](const Vector& x, const EpidemicNetwork& n, const EpidemicParams& p, const std::string& policy) {
              return step_controlled(x, n, p, policy_from_name(policy));
          },
          py::arg("x"), py::arg("network"), py::arg("params"), py::arg("policy") = "linear_distancing");
    m.def("build_system_matrices",
          [](const EpidemicNetwork& n, const EpidemicParams& p, const Vector& x) {
              SystemMatrices s = build_system_matrices(n, p, x);
              return py::make_tuple(s.m, s.b, s.m_hat);
          },
          py::arg("network"), py::arg("params"), py::arg("x"));
    m.def("simulate",
          [](const Vector& x0, const EpidemicNetwork& n, const EpidemicParams& p, const std::string& policy,
             std::size_t horizon, double stop_tol) {
              return simulate(x0, n, p, policy_from_name(policy), {horizon, stop_tol});
          },
          py::arg("x0"), py::arg("network"), py::arg("params"), py::arg("policy") = "linear_distancing",
          py::arg("horizon") = kDefaultHorizon, py::arg("stop_tol") = kDefaultStopTolerance);

    m.def("spectral_radius", [](const Matrix& a, double tol) { return spectral_radius(a, tol); }, py::arg("matrix"),
          py::arg("tol") = kSpectralTolerance);
    m.def("rho_M_closed_form", &rho_M_closed_form, py::arg("params"));
    m.def("classify_regime",
          [](const EpidemicNetwork& n, const EpidemicParams& p) { return as_python(to_json(classify_regime(n, p))); },
          py::arg("network"), py::arg("params"));

    m.def("endemic_closed_form", [](double r0) { return endemic_closed_form(r0).value; }, py::arg("r0"));
    m.def("endemic_fixed_point",
          [](const EpidemicNetwork& n, double r0, const Vector& x_init, double damping, double tol) {
              EquilibriumResult r = endemic_fixed_point(n, r0, x_init, {damping, tol, 100000});
              return py::dict(py::arg("x_bar") = r.x_bar, py::arg("vector_form") = r.vector_form,
                              py::arg("iterations") = r.iterations, py::arg("residual") = r.residual,
                              py::arg("damping") = r.damping);
          },
          py::arg("network"), py::arg("r0"), py::arg("x_init"), py::arg("damping") = 1.0, py::arg("tol") = 1e-12);
    m.def("uniqueness_probe",
          [](const EpidemicNetwork& n, double r0, std::size_t trials, std::uint64_t seed) {
              return as_python(to_json(uniqueness_probe(n, r0, trials, seed)));
          },
          py::arg("network"), py::arg("r0"), py::arg("trials"), py::arg("seed"));

    m.def("lyapunov_margin", &lyapunov_margin, py::arg("m"), py::arg("p_diag"));
    m.def("find_diagonal_lyapunov",
          [](const Matrix& mat) { return as_python(to_json(find_diagonal_lyapunov(mat))); }, py::arg("m"));
    m.def("verify_dfe_descent",
          [](const Trajectory& t, const Matrix& mat, const Vector& p_diag) {
              LyapunovCertificate cert;
              cert.p_diag = p_diag;
              return as_python(to_json(verify_dfe_descent(t, mat, cert)));
          },
          py::arg("trajectory"), py::arg("m"), py::arg("p_diag"));
    m.def("build_endemic_audit",
          [](const Trajectory& t, const EpidemicNetwork& n, const EpidemicParams& p, double x_bar) {
              return as_python(to_json(build_endemic_audit(t, n, p, x_bar)));
          },
          py::arg("trajectory"), py::arg("network"), py::arg("params"), py::arg("x_bar"));
    m.def("verify_half_bound",
          [](const Trajectory& t, const EpidemicParams& p) { return as_python(to_json(verify_half_bound(t, p))); },
          py::arg("trajectory"), py::arg("params"));

    m.def("run_scenario",
          [](const py::dict& config, const std::filesystem::path& base_dir) {
              const auto document = nlohmann::json::parse(py::module_::import("json").attr("dumps")(config).cast<std::string>());
              return as_python(to_json(run_scenario(parse_scenario_config(document, base_dir))));
          },
          py::arg("config"), py::arg("base_dir") = std::filesystem::path());
}
