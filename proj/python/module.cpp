#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hb/bellman.hpp"
#include "hb/cone.hpp"
#include "hb/grid.hpp"
#include "hb/quasi.hpp"
#include "hb/solver.hpp"
#include "hb/symfun.hpp"

namespace py = pybind11;

namespace {

hb::SymMat to_mat(const std::vector<std::vector<double>>& rows) {
    const int d = static_cast<int>(rows.size());
    if (d < 1 || d > hb::kMaxDim) throw std::invalid_argument("matrix dimension must be 1..6");
    hb::SymMat w(d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw std::invalid_argument("matrix rows must all have the same length");
        for (int j = 0; j <= i; ++j) {
            if (std::fabs(rows[i][j] - rows[j][i]) > 1e-9)
                throw std::invalid_argument("matrix is not symmetric");
            w.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
        }
    }
    return w;
}

std::vector<std::vector<double>> from_mat(const hb::SymMat& w) {
    const int d = w.dim();
    std::vector<std::vector<double>> rows(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rows[i][j] = w(i, j);
    return rows;
}

py::dict report_dict(const hb::ViolationReport& rep) {
    py::dict out;
    out["cases"] = rep.cases;
    out["violations"] = rep.violations;
    out["worst_slack"] = rep.worst_slack;
    out["pass"] = rep.pass();
    return out;
}

hb::DomainKind domain_kind(const std::string& s) {
    if (s == "disc") return hb::DomainKind::Disc;
    if (s == "square") return hb::DomainKind::Square;
    throw std::invalid_argument("domain must be 'disc' or 'square'");
}

hb::GFieldKind g_kind(const std::string& s) {
    if (s == "constant") return hb::GFieldKind::Constant;
    if (s == "radial_square") return hb::GFieldKind::RadialSquare;
    throw std::invalid_argument("g must be 'constant' or 'radial_square'");
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Degenerate Hessian Dirichlet problems via Bellman policy iteration";

    mod.def(
        "elem_sym",
        [](const std::vector<double>& lam, int k) {
            return hb::elem_sym(std::span<const double>(lam.data(), lam.size()), k);
        },
        py::arg("eigenvalues"), py::arg("k"),
        "k-th elementary symmetric polynomial of an eigenvalue list");

    mod.def(
        "pm", [](const std::vector<std::vector<double>>& w, int m) { return hb::pm_matrix(to_mat(w), m); },
        py::arg("w"), py::arg("m"), "P_m of a symmetric matrix");

    mod.def(
        "k_matrix",
        [](const std::vector<std::vector<double>>& w, int m) { return from_mat(hb::k_matrix(to_mat(w), m)); },
        py::arg("w"), py::arg("m"), "gradient matrix of P_m");

    mod.def(
        "in_cone",
        [](const std::vector<std::vector<double>>& w, int m) {
            const hb::ConeVerdict v = hb::in_cone(to_mat(w), m);
            py::dict out;
            out["inside"] = v.inside;
            out["margin"] = v.margin;
            out["shift_root"] = v.shift_root;
            return out;
        },
        py::arg("w"), py::arg("m"), "cone membership verdict");

    mod.def(
        "cone_root",
        [](const std::vector<std::vector<double>>& w, int m) { return hb::cone_root(to_mat(w), m); },
        py::arg("w"), py::arg("m"), "largest t with P_m(w + t I) = 0");

    mod.def(
        "admissible",
        [](const std::vector<std::vector<double>>& w, int m, double tol) {
            return hb::admissible(to_mat(w), m, tol);
        },
        py::arg("w"), py::arg("m"), py::arg("tol") = 0.0, "closed-cone membership with slack");

    mod.def(
        "normalized_coeff",
        [](const std::vector<std::vector<double>>& w, int m) {
            return from_mat(hb::normalized_coeff(to_mat(w), m));
        },
        py::arg("w"), py::arg("m"), "trace-normalized diffusion coefficient a(w)");

    mod.def(
        "kappa",
        [](const std::vector<std::vector<double>>& w, int m) { return hb::kappa(to_mat(w), m); },
        py::arg("w"), py::arg("m"), "free-term factor kappa(w)");

    mod.def(
        "free_term",
        [](const std::vector<std::vector<double>>& w, int m, double g) {
            return hb::free_term(to_mat(w), m, g);
        },
        py::arg("w"), py::arg("m"), py::arg("g"), "-kappa(w) g^{1-1/m}");

    mod.def(
        "g_value",
        [](const std::vector<std::vector<double>>& w, const std::vector<double>& l, int m) {
            return hb::g_value(to_mat(w), std::span<const double>(l.data(), l.size()), m);
        },
        py::arg("w"), py::arg("weights"), py::arg("m"), "weighted cone ratio sum");

    mod.def(
        "quasiconvexity_check",
        [](int d, int m, long pairs, std::uint64_t seed) {
            return report_dict(hb::quasiconvexity_check(d, m, pairs, seed));
        },
        py::arg("d"), py::arg("m"), py::arg("pairs") = 1000, py::arg("seed") = 1,
        "randomized midpoint quasiconvexity sweep");

    py::class_<hb::ControlNet>(mod, "ControlNet", "finite Bellman control net")
        .def_property_readonly("size",
                               [](const hb::ControlNet& n) { return n.controls.size(); })
        .def_property_readonly("d", [](const hb::ControlNet& n) { return n.d; })
        .def_property_readonly("m", [](const hb::ControlNet& n) { return n.m; })
        .def(
            "bellman_residual",
            [](const hb::ControlNet& n, const std::vector<std::vector<double>>& v, double c) {
                return hb::bellman_residual(to_mat(v), c, n);
            },
            py::arg("v"), py::arg("c"), "min over the net of trace(a v) - kappa c^{1/m}")
        .def(
            "concave_envelope",
            [](const hb::ControlNet& n, const std::vector<std::vector<double>>& v) {
                return hb::concave_envelope_check(to_mat(v), n);
            },
            py::arg("v"), "min over the net of trace(a v)/kappa");

    mod.def("build_control_net", &hb::build_control_net, py::arg("d"), py::arg("m"),
            py::arg("frames") = 4, py::arg("profiles") = 8, py::arg("seed") = 1,
            "deterministic lattice-frame control net");

    mod.def(
        "solve",
        [](const std::string& domain, int d, int m, double h, const std::string& g,
           double g_value, double K, int frames, int profiles, std::uint64_t seed, double tol,
           int max_iters, bool value_iteration) {
            hb::ProblemSpec spec;
            spec.domain = domain_kind(domain);
            spec.d = d;
            spec.m = m;
            spec.h = h;
            spec.K = K;
            spec.g_kind = g_kind(g);
            spec.g_value = g_value;
            const hb::GridProblem pb = hb::build_problem(spec);
            const hb::ControlNet net = hb::build_control_net(d, m, frames, profiles, seed);
            hb::SolverOptions opt;
            opt.tol = tol;
            opt.max_iters = max_iters;
            opt.value_iteration = value_iteration;
            const hb::SolveReport rep = hb::policy_iteration(pb, net, opt);

            py::dict mo;
            mo["barrier_ratio"] = rep.monitors.barrier_ratio;
            mo["max_gradient"] = rep.monitors.max_gradient;
            mo["interior_d2_max"] = rep.monitors.interior_d2_max;
            mo["boundary_d2_max"] = rep.monitors.boundary_d2_max;
            mo["d2_ratio"] = rep.monitors.d2_ratio;
            mo["min_boundary_normal"] = rep.monitors.min_boundary_normal;
            mo["subharmonic_slack"] = rep.monitors.subharmonic_slack;
            mo["sup_u"] = rep.monitors.sup_u;
            mo["admissibility_fraction"] = rep.monitors.admissibility_fraction;
            mo["admissibility_worst"] = rep.monitors.admissibility_worst;

            py::dict out;
            out["u"] = rep.u;
            out["n"] = pb.n;
            out["h"] = pb.h;
            out["interior"] = pb.interior;
            out["converged"] = rep.converged;
            out["iterations"] = rep.iterations;
            out["final_residual"] = rep.final_residual;
            out["controls"] = net.controls.size();
            out["degenerate_g_warning"] = rep.degenerate_g_warning;
            out["monitors"] = mo;
            return out;
        },
        py::arg("domain"), py::arg("d"), py::arg("m"), py::arg("h"), py::arg("g") = "constant",
        py::arg("g_value") = 1.0, py::arg("K") = 1.0, py::arg("frames") = 4,
        py::arg("profiles") = 8, py::arg("seed") = 1, py::arg("tol") = 1e-9,
        py::arg("max_iters") = 100, py::arg("value_iteration") = false,
        "solve one Dirichlet problem by policy iteration");
}
