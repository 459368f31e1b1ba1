#include "hb/props.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "hb/bellman.hpp"
#include "hb/cone.hpp"
#include "hb/quasi.hpp"
#include "hb/symfun.hpp"
#include "hb/symmat.hpp"

namespace hb {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

SymMat random_sym(std::mt19937_64& rng, int d, double amp) {
    SymMat w(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) w.set(i, j, uniform(rng, -amp, amp));
    return w;
}

/// Gram-Schmidt on random vectors; retries until well-conditioned.
void random_orthogonal(std::mt19937_64& rng, int d, double* q /* col-major, stride kMaxDim */) {
    for (int c = 0; c < d;) {
        double v[kMaxDim];
        for (int r = 0; r < d; ++r) v[r] = uniform(rng, -1.0, 1.0);
        for (int p = 0; p < c; ++p) {
            double dot = 0.0;
            for (int r = 0; r < d; ++r) dot += v[r] * q[p * kMaxDim + r];
            for (int r = 0; r < d; ++r) v[r] -= dot * q[p * kMaxDim + r];
        }
        double nrm = 0.0;
        for (int r = 0; r < d; ++r) nrm += v[r] * v[r];
        nrm = std::sqrt(nrm);
        if (nrm < 1e-3) continue;
        for (int r = 0; r < d; ++r) q[c * kMaxDim + r] = v[r] / nrm;
        ++c;
    }
}

SymMat conjugate(const SymMat& v, const double* q, int d) {
    double t[kMaxDim][kMaxDim]; // t = v * Q
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += v(i, k) * q[j * kMaxDim + k];
            t[i][j] = s;
        }
    SymMat out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += q[i * kMaxDim + k] * t[k][j];
            out.set(j, i, s);
        }
    return out;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<std::array<int, 2>> all_dims() {
    std::vector<std::array<int, 2>> out;
    for (int d = 2; d <= kMaxDim; ++d)
        for (int m = 2; m <= d; ++m) out.push_back({d, m});
    return out;
}

struct Check {
    PropResult res;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Check(std::string name) { res.name = std::move(name); }

    void record(double slack, double tol) {
        ++res.cases;
        res.worst_slack = res.cases == 1 ? slack : std::max(res.worst_slack, slack);
        if (slack > tol) ++res.violations;
    }
    PropResult done() {
        res.pass = res.violations == 0;
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }
};

PropResult from_report(const std::string& name, const ViolationReport& rep, double seconds) {
    PropResult r;
    r.name = name;
    r.cases = rep.cases;
    r.violations = rep.violations;
    r.worst_slack = rep.worst_slack;
    r.pass = rep.pass();
    r.seconds = seconds;
    return r;
}

} // namespace

std::vector<PropResult> run_algebra_suite(long trials, std::uint64_t seed) {
    const auto dims = all_dims();
    std::vector<PropResult> out;

    {
        Check c("trace_identity"); // trace K(v) = (d-m+1) P_{m-1}(v), any symmetric v
        std::mt19937_64 rng(seed ^ 0xA1);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = random_sym(rng, d, 2.0);
            const double lhs = k_matrix(v, m).trace();
            const double rhs = (d - m + 1) * elem_sym(eigenvalues(v), m - 1);
            c.record(std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)), 1e-10);
        }
        out.push_back(c.done());
    }
    {
        Check c("equivariance"); // K(Q^T v Q) = Q^T K(v) Q
        std::mt19937_64 rng(seed ^ 0xA2);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = random_sym(rng, d, 2.0);
            double q[kMaxDim * kMaxDim];
            random_orthogonal(rng, d, q);
            const SymMat lhs = k_matrix(conjugate(v, q, d), m);
            const SymMat rhs = conjugate(k_matrix(v, m), q, d);
            double diff = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j <= i; ++j) diff = std::max(diff, std::fabs(lhs(i, j) - rhs(i, j)));
            c.record(diff / std::max(1.0, rhs.max_abs()), 1e-9);
        }
        out.push_back(c.done());
    }
    {
        Check c("spectral_invariance"); // P_m(Q^T v Q) = P_m(v)
        std::mt19937_64 rng(seed ^ 0xA3);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = random_sym(rng, d, 2.0);
            double q[kMaxDim * kMaxDim];
            random_orthogonal(rng, d, q);
            const double a = pm_matrix(v, m), b = pm_matrix(conjugate(v, q, d), m);
            c.record(std::fabs(a - b) / std::max(1.0, std::fabs(a)), 1e-9);
        }
        out.push_back(c.done());
    }
    {
        Check c("homogeneity"); // K(s v) = s^{m-1} K(v), P_m(s v) = s^m P_m(v), s > 0
        std::mt19937_64 rng(seed ^ 0xA4);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = random_sym(rng, d, 2.0);
            const double s = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
            const SymMat ks = k_matrix(v * s, m);
            const SymMat kv = k_matrix(v, m);
            const double fac = std::pow(s, m - 1);
            double diff = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j <= i; ++j) diff = std::max(diff, std::fabs(ks(i, j) - fac * kv(i, j)));
            double slack = diff / std::max(1.0, fac * kv.max_abs());
            const double pmv = pm_matrix(v, m);
            slack = std::max(slack, std::fabs(pm_matrix(v * s, m) - std::pow(s, m) * pmv) /
                                        std::max(1.0, std::fabs(std::pow(s, m) * pmv)));
            c.record(slack, 1e-9);
        }
        out.push_back(c.done());
    }
    {
        Check c("root_superadditivity"); // P_m^{1/m}(v+w) >= P_m^{1/m}(v) + P_m^{1/m}(w) on the cone
        std::mt19937_64 rng(seed ^ 0xA5);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            const SymMat w = sample_cone_member(rng, d, m);
            const double lhs = root_m(pm_matrix(v + w, m), m);
            const double rhs = root_m(pm_matrix(v, m), m) + root_m(pm_matrix(w, m), m);
            c.record((rhs - lhs) / std::max(1.0, lhs), 1e-10);
        }
        out.push_back(c.done());
    }
    {
        Check c("cone_nesting"); // order-m membership implies order-(m-1) membership
        std::mt19937_64 rng(seed ^ 0xA6);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            const double lower =
                m == 2 ? v.trace() / std::max(1.0, v.max_abs()) : in_cone(v, m - 1).margin;
            c.record(-lower, 0.0);
        }
        out.push_back(c.done());
    }
    {
        Check c("ray_connectivity"); // the segment from v to the identity stays inside
        std::mt19937_64 rng(seed ^ 0xA7);
        const long sweeps = std::max(1L, trials / 100);
        for (long t = 0; t < sweeps; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            for (int i = 0; i <= 100; ++i) {
                const double s = i / 100.0;
                const SymMat p = v * (1.0 - s) + SymMat::identity(d) * s;
                c.record(-in_cone(p, m).margin, 0.0);
            }
        }
        out.push_back(c.done());
    }
    {
        Check c("submatrix_principle"); // minors land in the order-(m-1) cone one dimension down
        std::mt19937_64 rng(seed ^ 0xA8);
        std::vector<std::array<int, 2>> big;
        for (const auto& dm : dims)
            if (dm[0] >= 3) big.push_back(dm);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = big[t % big.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            double low = std::numeric_limits<double>::infinity();
            for (int k = 0; k < d; ++k) {
                const SymMat mnr = v.minor_matrix(k);
                const double margin = m == 2 ? mnr.trace() / std::max(1.0, mnr.max_abs())
                                             : in_cone(mnr, m - 1).margin;
                low = std::min(low, margin);
            }
            // the boolean route has to agree with the margin route
            if (!submatrix_cone_check(v, m)) low = std::min(low, 0.0);
            c.record(-low, 0.0);
        }
        out.push_back(c.done());
    }
    {
        Check c("gradient_definite"); // K(v) is positive definite inside the cone
        std::mt19937_64 rng(seed ^ 0xA9);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            const Spectrum lam = eigenvalues(k_matrix(v, m));
            c.record(-lam.values[0] / std::max(1.0, lam.max_abs()), 0.0);
        }
        out.push_back(c.done());
    }
    {
        Check c("pairing_positivity"); // trace(K(v) w) > 0 for cone members v, w
        std::mt19937_64 rng(seed ^ 0xAA);
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            const SymMat w = sample_cone_member(rng, d, m);
            const double pair = k_matrix(v, m).dot_trace(w);
            c.record(-pair / std::max(1.0, std::fabs(pair)), 0.0);
        }
        out.push_back(c.done());
    }
    {
        Check c("ratio_concavity"); // P_m/P_{m-1} is midpoint concave on the cone
        std::mt19937_64 rng(seed ^ 0xAB);
        auto ratio = [](const SymMat& v, int m) {
            const Spectrum lam = eigenvalues(v);
            return elem_sym(lam, m) / elem_sym(lam, m - 1);
        };
        for (long t = 0; t < trials; ++t) {
            const auto [d, m] = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, d, m);
            const SymMat w = sample_cone_member(rng, d, m);
            const double fm = ratio((v + w) * 0.5, m);
            const double avg = 0.5 * (ratio(v, m) + ratio(w, m));
            c.record((avg - fm) / std::max(1.0, std::fabs(fm)), 1e-9);
        }
        out.push_back(c.done());
    }
    {
        Check c("newton_log_concavity"); // (P_k/C(d,k))^2 >= neighbors' product, any spectrum
        std::mt19937_64 rng(seed ^ 0xAC);
        for (long t = 0; t < trials; ++t) {
            const int d = 2 + static_cast<int>(t % (kMaxDim - 1));
            const SymMat v = random_sym(rng, d, 2.0);
            std::array<double, kMaxDim + 1> e{};
            elem_sym_all(eigenvalues(v).span(), e);
            double slack = -std::numeric_limits<double>::infinity();
            for (int k = 1; k < d; ++k) {
                const double qk = e[k] / binom(d, k);
                const double ql = e[k - 1] / binom(d, k - 1);
                const double qr = e[k + 1] / binom(d, k + 1);
                slack = std::max(slack, (ql * qr - qk * qk) /
                                            std::max(1.0, std::fabs(ql * qr) + qk * qk));
            }
            c.record(slack, 1e-10);
        }
        out.push_back(c.done());
    }
    return out;
}

std::vector<PropResult> run_bellman_suite(long trials, std::uint64_t seed) {
    const auto dims = all_dims();
    std::vector<PropResult> out;

    std::map<std::array<int, 2>, ControlNet> nets;
    for (const auto& dm : dims)
        nets.emplace(dm, build_control_net(dm[0], dm[1], 4, 6, seed ^ 0xB0));

    {
        Check c("garding_residual"); // min over the net stays >= 0 on the closed cone
        std::mt19937_64 rng(seed ^ 0xB1);
        for (long t = 0; t < trials; ++t) {
            const auto dm = dims[t % dims.size()];
            SymMat v = sample_cone_member(rng, dm[0], dm[1]);
            if (t % 3 == 0) {
                // push onto the cone boundary: largest shift root moved to zero
                const double r = cone_root(v, dm[1]);
                v += SymMat::identity(dm[0]) * r;
            }
            const double pm = std::max(0.0, pm_matrix(v, dm[1]));
            const double resid = bellman_residual(v, pm, nets.at(dm));
            c.record(-resid / std::max(1.0, v.max_abs()), 1e-10);
        }
        out.push_back(c.done());
    }
    {
        Check c("aligned_tightness"); // appending the aligned control drives the residual to zero
        std::mt19937_64 rng(seed ^ 0xB2);
        for (long t = 0; t < trials; ++t) {
            const auto dm = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, dm[0], dm[1]);
            const ControlNet net = nets.at(dm).with_control(v);
            const double resid = bellman_residual(v, pm_matrix(v, dm[1]), net);
            c.record(std::fabs(resid) / std::max(1.0, v.max_abs()), 1e-8);
        }
        out.push_back(c.done());
    }
    {
        Check c("diffusion_scale_invariance"); // a(s w) = a(w), kappa(s w) = kappa(w)
        std::mt19937_64 rng(seed ^ 0xB3);
        {
            // frozen anchor: a(diag(1, 2)) at m = 2 is diag(2/3, 1/3)
            const double dvals[2] = {1.0, 2.0};
            const SymMat a = normalized_coeff(SymMat::diagonal({dvals, 2}), 2);
            const double diff = std::max({std::fabs(a(0, 0) - 2.0 / 3.0),
                                          std::fabs(a(1, 1) - 1.0 / 3.0), std::fabs(a(0, 1))});
            c.record(diff, 1e-13);
        }
        for (long t = 0; t < trials; ++t) {
            const auto dm = dims[t % dims.size()];
            const SymMat w = sample_cone_member(rng, dm[0], dm[1]);
            const double s = std::exp(uniform(rng, std::log(0.2), std::log(5.0)));
            const SymMat a1 = normalized_coeff(w, dm[1]);
            const SymMat a2 = normalized_coeff(w * s, dm[1]);
            double diff = 0.0;
            for (int i = 0; i < dm[0]; ++i)
                for (int j = 0; j <= i; ++j) diff = std::max(diff, std::fabs(a1(i, j) - a2(i, j)));
            diff = std::max(diff, std::fabs(kappa(w, dm[1]) - kappa(w * s, dm[1])) /
                                      std::max(1.0, kappa(w, dm[1])));
            c.record(diff, 1e-12);
        }
        out.push_back(c.done());
    }
    {
        Check c("envelope_bound"); // linearization envelope dominates P_m^{1/m}, tight aligned
        std::mt19937_64 rng(seed ^ 0xB4);
        for (long t = 0; t < trials; ++t) {
            const auto dm = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, dm[0], dm[1]);
            const double root = root_m(pm_matrix(v, dm[1]), dm[1]);
            const double env = concave_envelope_check(v, nets.at(dm));
            double slack = (root - env) / std::max(1.0, root); // env >= root required
            const double tight = concave_envelope_check(v, nets.at(dm).with_control(v));
            slack = std::max(slack, std::fabs(tight - root) / std::max(1.0, root) - 1e-8);
            c.record(slack, 1e-9);
        }
        out.push_back(c.done());
    }
    {
        Check c("net_refinement"); // enlarging the net can only lower the minimum
        std::mt19937_64 rng(seed ^ 0xB5);
        std::map<std::array<int, 2>, ControlNet> fine;
        for (const auto& dm : dims)
            fine.emplace(dm, build_control_net(dm[0], dm[1], 8, 6, seed ^ 0xB0));
        for (long t = 0; t < trials; ++t) {
            const auto dm = dims[t % dims.size()];
            const SymMat v = sample_cone_member(rng, dm[0], dm[1]);
            const double pm = pm_matrix(v, dm[1]);
            const double coarse = bellman_residual(v, pm, nets.at(dm));
            const double refined = bellman_residual(v, pm, fine.at(dm));
            c.record((refined - coarse) / std::max(1.0, std::fabs(coarse)), 1e-12);
        }
        out.push_back(c.done());
    }
    {
        Check c("flat_boundary_residual"); // identity input, inflated volume term
        const ControlNet net = build_control_net(2, 2, 4, 8, seed ^ 0xB0);
        const double resid = bellman_residual(SymMat::identity(2), 4.0, net);
        c.record(resid + 0.5, 0.0); // must sit at or below -1/2 (exact net value: -1)
        out.push_back(c.done());
    }
    return out;
}

std::vector<PropResult> run_quasi_suite(long pairs, std::uint64_t seed,
                                        std::span<const std::array<int, 2>> dims) {
    std::vector<PropResult> out;
    for (const auto& dm : dims) {
        const auto t0 = std::chrono::steady_clock::now();
        const ViolationReport rep = quasiconvexity_check(dm[0], dm[1], pairs, seed);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(from_report(
            "quasiconvex_" + std::to_string(dm[0]) + "_" + std::to_string(dm[1]), rep, secs));
    }
    for (const auto& dm : dims) {
        if (dm[1] != 2) continue;
        const double powers[2] = {3.0, 1.5};
        const auto t0 = std::chrono::steady_clock::now();
        const ViolationReport rep = f_k_quasiconvexity_check(dm[0], dm[1], {powers, 2}, pairs, seed + 1);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(from_report(
            "fk_quasiconvex_" + std::to_string(dm[0]) + "_" + std::to_string(dm[1]), rep, secs));
    }
    for (double n : {1.0, 2.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const ViolationReport rep = scalar_convexity_check(n, 50);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(from_report("scalar_kernel_n" + std::to_string(static_cast<int>(n)), rep, secs));
    }
    return out;
}

} // namespace hb
