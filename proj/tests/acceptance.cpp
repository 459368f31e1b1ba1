// Acceptance runner: one line per criterion, nonzero exit on any failure.
// Criteria group into randomized property suites (1-3), exact-solution
// benchmarks on the disc (4-5), regularity surrogates (6), admissibility
// audits (7) and byte-level determinism of the CLI artifacts (8).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hb/config.hpp"
#include "hb/props.hpp"
#include "hb/run.hpp"
#include "hb/solver.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

bool absorb(const std::vector<hb::PropResult>& results, std::ostringstream& detail) {
    bool ok = true;
    long checks = 0, violations = 0;
    for (const auto& r : results) {
        ++checks;
        violations += r.violations;
        if (!r.pass) {
            ok = false;
            detail << " FAILED " << r.name << " (worst slack " << fmt(r.worst_slack) << ")";
        }
    }
    detail << checks << " checks, " << violations << " violations";
    return ok;
}

hb::GridProblem disc_problem(double h, hb::GFieldKind g_kind, double K) {
    hb::ProblemSpec s;
    s.domain = hb::DomainKind::Disc;
    s.d = 2;
    s.m = 2;
    s.h = h;
    s.g_kind = g_kind;
    s.g_value = 1.0;
    s.K = K;
    return hb::build_problem(s);
}

double sup_interior_error(const hb::GridProblem& pb, const std::vector<double>& u,
                          double (*exact)(double)) {
    double worst = 0.0;
    for (int idx : pb.interior) {
        const auto x = pb.point(idx);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        worst = std::max(worst, std::fabs(u[idx] - exact(r)));
    }
    return worst;
}

double exact_flat(double r) { return (r * r - 1.0) / 2.0; }
double exact_cubic(double r) { return (r * r * r - 1.0) / (3.0 * std::sqrt(2.0)); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Shared expensive artifacts: criterion 4's h = 1/32 solve feeds criterion 7,
// criterion 5's ladder feeds criteria 6 and 7.
struct Shared {
    hb::GridProblem pb4{};
    hb::SolveReport sol4;
    hb::GridProblem pb5{};
    hb::LadderReport lad5;
    bool have4 = false, have5 = false;
};

void criterion_1(void) {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    detail << "algebra suite: ";
    bool ok = absorb(hb::run_algebra_suite(10000, 1), detail);
    const double secs = seconds_since(t0);
    detail << " (" << fmt(secs) << " s, budget 30)";
    if (secs >= 30.0) ok = false;
    report(1, ok, detail.str());
}

void criterion_2(void) {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    detail << "quasiconvexity suite: ";
    const std::array<std::array<int, 2>, 4> dims{{{2, 2}, {3, 2}, {3, 3}, {4, 3}}};
    bool ok = absorb(hb::run_quasi_suite(10000, 1, dims), detail);
    const double secs = seconds_since(t0);
    detail << " (" << fmt(secs) << " s, budget 60)";
    if (secs >= 60.0) ok = false;
    report(2, ok, detail.str());
}

void criterion_3(void) {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    detail << "residual sign suite: ";
    bool ok = absorb(hb::run_bellman_suite(1000, 1), detail);
    // The constructed mismatch must go decisively negative.
    const auto net = hb::build_control_net(2, 2, 4, 8, 1);
    const double mismatched = hb::bellman_residual(hb::SymMat::identity(2), 4.0, net);
    detail << ", mismatched-c residual " << fmt(mismatched);
    if (!(mismatched <= -0.5)) ok = false;
    const double secs = seconds_since(t0);
    detail << " (" << fmt(secs) << " s, budget 30)";
    if (secs >= 30.0) ok = false;
    report(3, ok, detail.str());
}

void criterion_4(Shared& sh) {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    bool ok = true;
    std::vector<double> errs;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        const auto pb = disc_problem(h, hb::GFieldKind::Constant, 1.0);
        const auto net = hb::build_control_net(2, 2, 8, 8, 1);
        const auto rep = hb::policy_iteration(pb, net);
        if (!rep.converged) ok = false;
        errs.push_back(sup_interior_error(pb, rep.u, exact_flat));
        if (h == 1.0 / 32) {
            sh.pb4 = pb;
            sh.sol4 = rep;
            sh.have4 = true;
        }
    }
    detail << "flat benchmark sup errors " << fmt(errs[0]) << " / " << fmt(errs[1]) << " / "
           << fmt(errs[2]) << " over h = 1/16, 1/32, 1/64";
    if (!(errs[1] <= 2e-2)) ok = false;
    if (!(errs[1] <= errs[0] + 1e-8) || !(errs[2] <= errs[1] + 1e-8)) ok = false;
    const double secs = seconds_since(t0);
    detail << " (" << fmt(secs) << " s, budget 120)";
    if (secs >= 120.0) ok = false;
    report(4, ok, detail.str());
}

void criterion_5(Shared& sh) {
    const auto t0 = Clock::now();
    std::ostringstream detail;
    bool ok = true;
    const auto pb = disc_problem(1.0 / 64, hb::GFieldKind::RadialSquare, 4.0);
    if (!pb.assumption_grad_ok || pb.assumption_worst_slack != 0.0) {
        ok = false;
        detail << "gradient bound not exact! ";
    }
    const auto net = hb::build_control_net(2, 2, 8, 8, 1);
    const auto lad = hb::degeneracy_ladder(pb, net, {8, 32, 128});
    sh.pb5 = pb;
    sh.lad5 = lad;
    sh.have5 = true;
    const auto& last = lad.rungs.back();
    const double err = sup_interior_error(pb, last.u, exact_cubic);
    const double hopf = last.monitors.min_boundary_normal;
    const double target = -1.0 / std::sqrt(2.0);
    detail << "degenerate benchmark sup error " << fmt(err) << ", boundary normal "
           << fmt(hopf) << " (target " << fmt(target) << ")";
    if (!(err <= 5e-2)) ok = false;
    if (!(std::fabs(hopf - target) <= 5e-2)) ok = false;
    if (!last.monitors.assumption_grad_ok || last.monitors.assumption_worst_slack != 0.0)
        ok = false;
    const double secs = seconds_since(t0);
    detail << " (" << fmt(secs) << " s, budget 300)";
    if (secs >= 300.0) ok = false;
    report(5, ok, detail.str());
}

void criterion_6(const Shared& sh) {
    std::ostringstream detail;
    bool ok = sh.have5;
    if (!ok) {
        report(6, false, "skipped: criterion 5 artifacts unavailable");
        return;
    }
    detail << "second-difference ladder variation " << fmt(sh.lad5.d2_variation);
    if (!sh.lad5.c11_surrogate_ok) ok = false;
    // Stability of the interior/boundary second-difference ratio under
    // h-refinement: within 20% between h = 1/32 and h = 1/64.
    const auto pb32 = disc_problem(1.0 / 32, hb::GFieldKind::RadialSquare, 4.0);
    const auto net = hb::build_control_net(2, 2, 8, 8, 1);
    const auto lad32 = hb::degeneracy_ladder(pb32, net, {8, 32, 128});
    const double n32 = lad32.rungs.back().monitors.d2_ratio;
    const double n64 = sh.lad5.rungs.back().monitors.d2_ratio;
    detail << ", d2 ratio " << fmt(n32) << " -> " << fmt(n64) << " under refinement";
    if (!(std::fabs(n64 - n32) <= 0.2 * std::max(std::fabs(n32), std::fabs(n64)))) ok = false;
    report(6, ok, detail.str());
}

void criterion_7(const Shared& sh) {
    std::ostringstream detail;
    if (!sh.have4 || !sh.have5) {
        report(7, false, "skipped: benchmark artifacts unavailable");
        return;
    }
    bool ok = true;
    const auto a4 = hb::admissibility_audit(sh.pb4, sh.sol4.u);
    const auto a5 = hb::admissibility_audit(sh.pb5, sh.lad5.rungs.back().u);
    detail << "admissible fractions " << fmt(a4.fraction) << " (flat, need 1) and "
           << fmt(a5.fraction) << " (degenerate, need >= 0.99)";
    if (a4.fraction != 1.0) ok = false;
    if (!(a5.fraction >= 0.99)) ok = false;
    report(7, ok, detail.str());
}

void criterion_8(void) {
    namespace fs = std::filesystem;
    std::ostringstream detail;
    bool ok = true;
    const fs::path root = fs::temp_directory_path() / "hb_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto cfg = hb::parse_config_text(
        "[problem]\n"
        "domain = disc\n"
        "d = 2\nm = 2\nh = 0.0625\n"
        "g = constant\ng_value = 1.0\n"
        "[net]\nframes = 6\nprofiles = 8\nseed = 3\n");
    std::ostringstream log;
    for (const char* sub : {"a", "b"}) {
        if (hb::run_command("solve", cfg, (root / sub).string(), -1, log) != 0) ok = false;
    }
    const std::string ua = slurp(root / "a" / "u.csv");
    const std::string ub = slurp(root / "b" / "u.csv");
    if (ua.empty() || ua != ub) ok = false;
    detail << "repeated solve CSVs " << (ua == ub && !ua.empty() ? "byte-identical" : "DIFFER")
           << " (" << ua.size() << " bytes)";
    fs::remove_all(root);
    report(8, ok, detail.str());
}

} // namespace

int main() {
    Shared sh;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4(sh);
    criterion_5(sh);
    criterion_6(sh);
    criterion_7(sh);
    criterion_8();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
