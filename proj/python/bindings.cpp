#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmcshoot/assembly.hpp"
#include "cmcshoot/geometry.hpp"
#include "cmcshoot/io.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"

namespace py = pybind11;
using namespace cmcshoot;

namespace {

py::object json_to_py(const io::json& j) {
    switch (j.type()) {
        case nlohmann::detail::value_t::object: {
            py::dict d;
            for (const auto& [key, value] : j.items()) d[py::str(key)] = json_to_py(value);
            return d;
        }
        case nlohmann::detail::value_t::array: {
            py::list l;
            for (const auto& value : j) l.append(json_to_py(value));
            return l;
        }
        case nlohmann::detail::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::detail::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::detail::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::detail::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::detail::value_t::number_float: return py::float_(j.get<double>());
        default: return py::none();
    }
}

Params make_params_py(const std::string& family, int n, double lambda) {
    const FamilyKind kind = family_kind_from_string(family);
    return make_params(kind == FamilyKind::S2n ? Family::s2n(n) : Family::s3n_minus_1(n),
                       lambda);
}

ShootConfig config_of(double rtol, double atol, double event_tol) {
    ShootConfig cfg;
    cfg.ode.rtol = rtol;
    cfg.ode.atol = atol;
    cfg.ode.event_tol = event_tol;
    cfg.ode.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Closed constant-mean-curvature generating curves in sphere quotients";

    py::register_exception<InvalidParameter>(m, "InvalidParameterError", PyExc_ValueError);
    py::register_exception<SingularCoordinate>(m, "SingularCoordinateError", PyExc_ArithmeticError);
    py::register_exception<SolverError>(m, "SolverFailure", PyExc_RuntimeError);

    py::class_<Family>(m, "Family")
        .def_static("s2n", &Family::s2n, py::arg("n"))
        .def_static("s3n_minus_1", &Family::s3n_minus_1, py::arg("n"))
        .def_readonly("n", &Family::n)
        .def_property_readonly("kind", [](const Family& f) { return to_string(f.kind); })
        .def_property_readonly("ambient_dim", &Family::ambient_dim)
        .def_property_readonly("hypersurface_dim", &Family::hypersurface_dim)
        .def("__repr__", [](const Family& f) {
            return "Family(" + to_string(f.kind) + ", n=" + std::to_string(f.n) + ")";
        });

    py::class_<Params>(m, "Params")
        .def(py::init(&make_params_py), py::arg("family"), py::arg("n"), py::arg("lambda_"))
        .def_readonly("family", &Params::family)
        .def_readonly("lambda_", &Params::lambda)
        .def("__repr__", [](const Params& p) {
            return "Params(" + to_string(p.family.kind) + ", n=" + std::to_string(p.family.n) +
                   ", lambda=" + io::format_full(p.lambda) + ")";
        });

    py::class_<ShootingState>(m, "State")
        .def(py::init([](double r, double theta, double alpha) {
                 return ShootingState{r, theta, alpha};
             }),
             py::arg("r"), py::arg("theta"), py::arg("alpha"))
        .def_readonly("r", &ShootingState::r)
        .def_readonly("theta", &ShootingState::theta)
        .def_readonly("alpha", &ShootingState::alpha)
        .def("__repr__", [](const ShootingState& s) {
            return "State(r=" + io::format_full(s.r) + ", theta=" + io::format_full(s.theta) +
                   ", alpha=" + io::format_full(s.alpha) + ")";
        });

    m.def("rhs",
          [](const Params& p, const ShootingState& s) {
              const StateDeriv d = rhs(p, s);
              return py::make_tuple(d.dr, d.dtheta, d.dalpha);
          },
          py::arg("params"), py::arg("state"),
          "Arc-length derivatives (dr, dtheta, dalpha) of the reduced system");
    m.def("rhs_alpha", &rhs_alpha, py::arg("params"), py::arg("state"));
    m.def("beta_angle", [](double r, double theta) { return beta_angle({r, theta}); },
          py::arg("r"), py::arg("theta"),
          "Orthogonality angle -arctan(sin r sin theta) of the mirror {tan r cos theta = 1}");
    m.def("mean_curvature", &mean_curvature, py::arg("family"), py::arg("state"),
          py::arg("alpha_prime"));
    m.def("lift",
          [](const Family& f, double r, double theta,
             const std::vector<std::vector<double>>& dirs) {
              return lift(f, {r, theta}, dirs);
          },
          py::arg("family"), py::arg("r"), py::arg("theta"),
          py::arg("dirs") = std::vector<std::vector<double>>{},
          "Ambient unit-sphere lift of a quotient point");
    m.def("exit_radius_factor", &exit_radius_factor, py::arg("n"));

    py::class_<ShotResult>(m, "ShotResult")
        .def_readonly("r0", &ShotResult::r0)
        .def_property_readonly("exit", [](const ShotResult& s) { return to_string(s.exit); })
        .def_readonly("s_star", &ShotResult::s_star)
        .def_readonly("state_exit", &ShotResult::state_exit)
        .def_property_readonly("monitors_pass",
                               [](const ShotResult& s) { return s.monitors.all_pass(); })
        .def("eval",
             [](const ShotResult& s, double arc) {
                 return state_of(s.trajectory.eval(arc));
             },
             py::arg("s"), "Dense-output state at arc length s")
        .def("samples",
             [](const ShotResult& s) {
                 py::list out;
                 for (std::size_t i = 0; i < s.trajectory.size(); ++i) {
                     const ShootingState st = state_of(s.trajectory.sample_y(i));
                     out.append(py::make_tuple(s.trajectory.sample_s(i), st.r, st.theta,
                                               st.alpha));
                 }
                 return out;
             })
        .def("__repr__", [](const ShotResult& s) {
            return "ShotResult(r0=" + io::format_full(s.r0) + ", exit=" + to_string(s.exit) +
                   ", s_star=" + io::format_full(s.s_star) + ")";
        });

    m.def("shoot",
          [](const Params& p, double r0, double rtol, double atol, double event_tol) {
              return shoot(p, r0, config_of(rtol, atol, event_tol));
          },
          py::arg("params"), py::arg("r0"), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12,
          py::arg("event_tol") = 1e-12,
          "Integrate one trajectory from (r0, pi/4, -pi/2) until it exits the shooting box");

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("r0_star", &SolveResult::r0_star)
        .def_readonly("shot", &SolveResult::shot)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("residual_alpha", &SolveResult::residual_alpha)
        .def_readonly("residual_wall", &SolveResult::residual_wall)
        .def_readonly("converged", &SolveResult::converged)
        .def("__repr__", [](const SolveResult& s) {
            return "SolveResult(r0_star=" + io::format_full(s.r0_star) + ")";
        });

    m.def("solve",
          [](const Params& p, double tol_r0, double rtol, double atol, double event_tol) {
              return solve_generating_arc(p, tol_r0, config_of(rtol, atol, event_tol));
          },
          py::arg("params"), py::arg("tol_r0") = 1e-12, py::arg("rtol") = 1e-10,
          py::arg("atol") = 1e-12, py::arg("event_tol") = 1e-12,
          "Locate the initial radius whose arc closes into a generating curve");

    py::class_<GeneratingCurve>(m, "GeneratingCurve")
        .def_readonly("lambda_", &GeneratingCurve::lambda)
        .def_readonly("r0", &GeneratingCurve::r0)
        .def_readonly("s_star", &GeneratingCurve::s_star)
        .def_readonly("copies", &GeneratingCurve::copies)
        .def_readonly("length", &GeneratingCurve::length)
        .def_readonly("closed", &GeneratingCurve::closed)
        .def("samples",
             [](const GeneratingCurve& c) {
                 py::list out;
                 for (const CurveSample& cs : c.samples) {
                     out.append(py::make_tuple(cs.s, cs.r, cs.theta, cs.alpha));
                 }
                 return out;
             })
        .def("__repr__", [](const GeneratingCurve& c) {
            return "GeneratingCurve(copies=" + std::to_string(c.copies) +
                   ", length=" + io::format_full(c.length) + ")";
        });

    m.def("assemble", &assemble, py::arg("params"), py::arg("shot"),
          py::arg("samples_per_curve") = kCurveSamples,
          "Reflect the converged arc into the closed generating curve");
    m.def("certify",
          [](const GeneratingCurve& c) {
              const Certificate cert = certify(c);
              return json_to_py(io::json{{"closed", cert.closed},
                                         {"closure_gap", cert.closure_gap},
                                         {"seam_defect", cert.seam_defect},
                                         {"simple", cert.simple},
                                         {"min_boundary_dist", cert.min_boundary_dist},
                                         {"length", cert.length},
                                         {"copies", cert.copies}});
          },
          py::arg("curve"), "Closure, seam, simplicity and interiority certificate");
    m.def("check_H",
          [](const GeneratingCurve& c, const Params& p) {
              const HCheck h = check_H(c, p);
              return json_to_py(io::json{{"algebraic", h.max_dev_algebraic},
                                         {"finite_difference", h.max_dev_finite_difference},
                                         {"skipped_samples", h.skipped}});
          },
          py::arg("curve"), py::arg("params"),
          "Worst |H - lambda| along the curve by two independent routes");
    m.def("run_claim_suite",
          []() { return json_to_py(io::claims_json(run_claim_suite())); },
          "Shoot the default grid and evaluate every applicable bound");
}
