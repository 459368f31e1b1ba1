#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hb/errors.hpp"
#include "hb/solver.hpp"

using hb::DomainKind;
using hb::GridProblem;
using hb::ProblemSpec;

namespace {
GridProblem disc_problem(double h, double g_value, int d = 2) {
    ProblemSpec s;
    s.domain = DomainKind::Disc;
    s.d = d;
    s.m = 2;
    s.h = h;
    s.g_value = g_value;
    return hb::build_problem(s);
}

// scale * (|x|^2 - 1)/2: Hessian = scale * I and zero boundary data, so the
// Shortley-Weller cut arms (which pin the crossing value to zero) are exact.
std::vector<double> quadratic_field(const GridProblem& pb, double scale) {
    std::vector<double> u(pb.node_count(), 0.0);
    for (long idx = 0; idx < pb.node_count(); ++idx) {
        const auto x = pb.point(static_cast<int>(idx));
        double r2 = 0.0;
        for (int a = 0; a < pb.d; ++a) r2 += x[a] * x[a];
        u[idx] = scale * (r2 - 1.0) / 2.0;
    }
    return u;
}

double sup_error_vs_disc_quadratic(const GridProblem& pb, const std::vector<double>& u) {
    double worst = 0.0;
    for (int idx : pb.interior) {
        const auto x = pb.point(idx);
        double r2 = 0.0;
        for (int a = 0; a < pb.d; ++a) r2 += x[a] * x[a];
        worst = std::max(worst, std::fabs(u[idx] - (r2 - 1.0) / 2.0));
    }
    return worst;
}
} // namespace

TEST_CASE("operator vanishes on the matched quadratic and picks the isotropic control") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 8, 1);
    const auto u = quadratic_field(pb, 1.0); // Hessian = identity, P_2 = g = 1
    const int iso = static_cast<int>(net.controls.size()) - 1;
    for (int idx : pb.interior) {
        const auto [value, argmin] = hb::discrete_bellman_operator(pb, net, u, idx);
        CHECK(std::fabs(value) <= 1e-10); // cut arms included: exact on quadratics
        CHECK(argmin == iso);
    }
}

TEST_CASE("operator rejects non-interior nodes and bad vectors") {
    const auto pb = disc_problem(0.25, 1.0);
    const auto net = hb::build_control_net(2, 2, 2, 2, 1);
    std::vector<double> u(pb.node_count(), 0.0);
    CHECK_THROWS_AS((void)hb::discrete_bellman_operator(pb, net, u, 0), std::invalid_argument);
    u.pop_back();
    CHECK_THROWS_AS((void)hb::discrete_bellman_operator(pb, net, u, pb.interior[0]),
                    std::invalid_argument);
}

TEST_CASE("constant g reproduces the exact discrete quadratic") {
    const auto pb = disc_problem(1.0 / 16, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 8, 1);
    const auto rep = hb::policy_iteration(pb, net);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 3);
    CHECK(rep.final_residual <= 1e-9);
    CHECK_FALSE(rep.degenerate_g_warning);
    CHECK(sup_error_vs_disc_quadratic(pb, rep.u) <= 1e-8);
    const int center = pb.index({pb.n / 2, pb.n / 2, 0});
    CHECK(rep.u[center] == doctest::Approx(-0.5).epsilon(1e-8));
    // Policy is isotropic everywhere.
    const int iso = static_cast<int>(net.controls.size()) - 1;
    for (int p : rep.policy) CHECK(p == iso);
}

TEST_CASE("zero g gives the zero solution with a degeneracy warning") {
    const auto pb = disc_problem(1.0 / 8, 0.0);
    const auto net = hb::build_control_net(2, 2, 4, 4, 1);
    const auto rep = hb::policy_iteration(pb, net);
    CHECK(rep.converged);
    CHECK(rep.degenerate_g_warning);
    for (int idx : pb.interior) CHECK(std::fabs(rep.u[idx]) <= 1e-12);
}

TEST_CASE("howard and value iteration agree") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 1);
    hb::SolverOptions vi;
    vi.value_iteration = true;
    vi.tol = 1e-10;
    const auto a = hb::policy_iteration(pb, net);
    const auto b = hb::policy_iteration(pb, net, vi);
    CHECK(b.converged);
    CHECK(b.iterations > a.iterations); // sweeps, not improvements
    double diff = 0.0;
    for (int idx : pb.interior) diff = std::max(diff, std::fabs(a.u[idx] - b.u[idx]));
    CHECK(diff <= 1e-6);
}

TEST_CASE("warm start from the solution converges immediately and exactly") {
    const auto pb = disc_problem(1.0 / 8, 2.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 3);
    const auto first = hb::policy_iteration(pb, net);
    hb::SolverOptions opt;
    opt.warm_start = first.u;
    const auto second = hb::policy_iteration(pb, net, opt);
    CHECK(second.converged);
    CHECK(second.iterations == 1);
    for (long i = 0; i < pb.node_count(); ++i) CHECK(second.u[i] == first.u[i]);
}

TEST_CASE("residual history is recorded and final residual matches") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 1);
    const auto rep = hb::policy_iteration(pb, net);
    REQUIRE(!rep.residual_history.empty());
    CHECK(static_cast<int>(rep.residual_history.size()) == rep.iterations);
    CHECK(rep.final_residual == rep.residual_history.back());
    CHECK(rep.residual_history.front() > rep.residual_history.back());
}

TEST_CASE("exhausted improvement budget throws with history attached") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 1);
    hb::SolverOptions opt;
    opt.max_iters = 1;
    try {
        (void)hb::policy_iteration(pb, net, opt);
        FAIL("expected ConvergenceError");
    } catch (const hb::ConvergenceError& e) {
        CHECK(e.residual_history.size() == 1);
        CHECK(e.residual_history[0] > 0.0);
    }
}

TEST_CASE("solver validates its inputs") {
    const auto pb = disc_problem(0.25, 1.0);
    const auto net = hb::build_control_net(2, 2, 2, 2, 1);
    hb::SolverOptions opt;
    opt.tol = 0.0;
    CHECK_THROWS_AS((void)hb::policy_iteration(pb, net, opt), std::invalid_argument);
    opt.tol = 1e-9;
    opt.max_iters = 0;
    CHECK_THROWS_AS((void)hb::policy_iteration(pb, net, opt), std::invalid_argument);
    opt.max_iters = 100;
    opt.warm_start.assign(3, 0.0);
    CHECK_THROWS_AS((void)hb::policy_iteration(pb, net, opt), std::invalid_argument);
    // Nets must match (d, m) and carry lattice frames throughout.
    const auto net3 = hb::build_control_net(3, 2, 4, 2, 1);
    CHECK_THROWS_AS((void)hb::policy_iteration(pb, net3), std::invalid_argument);
    const auto patched = net.with_control(hb::SymMat::identity(2));
    CHECK_THROWS_AS((void)hb::policy_iteration(pb, patched), std::invalid_argument);
}

TEST_CASE("admissibility audit separates convex from concave quadratics") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto good = hb::admissibility_audit(pb, quadratic_field(pb, 1.0));
    CHECK(good.audited > 0);
    CHECK(good.passed == good.audited);
    CHECK(good.fraction == 1.0);
    const auto bad = hb::admissibility_audit(pb, quadratic_field(pb, -1.0));
    CHECK(bad.audited == good.audited);
    CHECK(bad.passed == 0);
    CHECK(bad.fraction == 0.0);
    CHECK(bad.worst_margin < good.worst_margin);
}

TEST_CASE("monitors on the exact quadratic solution") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 8, 1);
    const auto rep = hb::policy_iteration(pb, net);
    const auto& mon = rep.monitors;
    // u = (|x|^2 - 1)/2: |u| = psi everywhere, second differences are exactly 1.
    CHECK(mon.sup_u < 0.0);
    CHECK(mon.barrier_ratio == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(mon.interior_d2_max == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mon.boundary_d2_max == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mon.d2_ratio == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(mon.min_boundary_normal == doctest::Approx(-1.0).epsilon(0.25));
    CHECK(mon.min_boundary_normal < 0.0);
    CHECK(mon.subharmonic_slack >= -1e-7);
    CHECK(mon.max_gradient <= 1.5);
    CHECK(mon.max_gradient > 0.5);
    CHECK(mon.admissibility_fraction == 1.0);
    CHECK(mon.assumption_grad_ok);
    CHECK(mon.assumption_gpos_ok);
    // Standalone recomputation agrees with the in-solve block.
    const auto redo = hb::solution_monitors(pb, rep.u);
    CHECK(redo.barrier_ratio == mon.barrier_ratio);
    CHECK(redo.interior_d2_max == mon.interior_d2_max);
    CHECK(redo.min_boundary_normal == mon.min_boundary_normal);
    CHECK(redo.admissibility_fraction == mon.admissibility_fraction);
}

TEST_CASE("ladder warm-starts rungs and reports pairwise gaps") {
    const auto pb = disc_problem(1.0 / 8, 1.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 1);
    const std::vector<int> n_list{4, 16};
    const auto lad = hb::degeneracy_ladder(pb, net, n_list);
    CHECK(lad.n_list == n_list);
    REQUIRE(lad.rungs.size() == 2);
    CHECK(lad.pairwise_sup.size() == 1);
    CHECK(lad.pairwise_sup[0] > 0.0);
    CHECK(lad.c11_surrogate_ok);
    for (const auto& r : lad.rungs) CHECK(r.converged);
    // g + 1/8 pushes the solution further down than g + 1/32.
    const int center = pb.index({pb.n / 2, pb.n / 2, 0});
    CHECK(lad.rungs[0].u[center] < lad.rungs[1].u[center]);
    CHECK(lad.rungs[1].u[center] < 0.0);
    // Exact values: u_n = sqrt(1 + 1/(2n)) (|x|^2 - 1)/2 on the disc.
    CHECK(lad.rungs[0].u[center] ==
          doctest::Approx(-std::sqrt(1.125) / 2.0).epsilon(1e-7));
    CHECK(lad.rungs[1].u[center] ==
          doctest::Approx(-std::sqrt(1.03125) / 2.0).epsilon(1e-7));
}

TEST_CASE("ladder validates the n list") {
    const auto pb = disc_problem(0.25, 1.0);
    const auto net = hb::build_control_net(2, 2, 2, 2, 1);
    CHECK_THROWS_AS((void)hb::degeneracy_ladder(pb, net, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)hb::degeneracy_ladder(pb, net, {4, 4}), std::invalid_argument);
    CHECK_THROWS_AS((void)hb::degeneracy_ladder(pb, net, {8, 4}), std::invalid_argument);
    CHECK_THROWS_AS((void)hb::degeneracy_ladder(pb, net, {0, 4}), std::invalid_argument);
}

TEST_CASE("ladder handles degenerate g without a warning on the shifted rungs") {
    // g = |x|^2 vanishes at the origin; every rung is strictly positive.
    ProblemSpec s;
    s.domain = DomainKind::Disc;
    s.d = 2;
    s.m = 2;
    s.h = 1.0 / 8;
    s.g_kind = hb::GFieldKind::RadialSquare;
    s.K = 4.0;
    const auto pb = hb::build_problem(s);
    CHECK(pb.g_min == 0.0);
    const auto net = hb::build_control_net(2, 2, 4, 6, 1);
    const auto lad = hb::degeneracy_ladder(pb, net, {4, 16});
    for (const auto& r : lad.rungs) {
        CHECK(r.converged);
        CHECK_FALSE(r.degenerate_g_warning);
        CHECK(r.monitors.assumption_gpos_ok);
    }
}
