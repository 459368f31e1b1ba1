#include "hb/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "hb/symfun.hpp"

namespace hb {

namespace {

/// One second-difference arm pair along a lattice direction. nb < 0 means the
/// arm was cut by the boundary and the far value is the Dirichlet datum 0.
struct ArmPair {
    int nb_p = -1, nb_m = -1;
    double c_p = 0.0, c_m = 0.0;
};

struct ArmGeom {
    double delta = 0.0;
    int nb = -1;
};

struct DirGeom {
    std::array<int, 3> p{};
    std::array<double, 3> e{};
    double norm = 0.0;
};

DirGeom make_dir(const int* p, int d) {
    DirGeom dg;
    double n2 = 0.0;
    for (int a = 0; a < d; ++a) {
        dg.p[a] = p[a];
        n2 += static_cast<double>(p[a]) * p[a];
    }
    dg.norm = std::sqrt(n2);
    for (int a = 0; a < d; ++a) dg.e[a] = p[a] / dg.norm;
    return dg;
}

/// Euclidean distance from the interior point x to the domain boundary along
/// the unit direction e. Both domains are convex, so the first crossing is
/// the only one.
double crossing_distance(const GridProblem& pb, const std::array<double, 3>& x,
                         const std::array<double, 3>& e) {
    if (pb.domain == DomainKind::Disc) {
        double b = 0.0, r2 = 0.0;
        for (int a = 0; a < pb.d; ++a) {
            b += 2.0 * x[a] * e[a];
            r2 += x[a] * x[a];
        }
        const double c = r2 - 1.0; // negative inside
        const double sq = std::sqrt(b * b - 4.0 * c);
        return b > 0.0 ? 2.0 * (-c) / (b + sq) : 0.5 * (sq - b);
    }
    double s = std::numeric_limits<double>::infinity();
    for (int a = 0; a < pb.d; ++a) {
        if (e[a] > 1e-15)
            s = std::min(s, (1.0 - x[a]) / e[a]);
        else if (e[a] < -1e-15)
            s = std::min(s, (-1.0 - x[a]) / e[a]);
    }
    return s;
}

/// Walks one lattice step of sgn * dg.p from the interior node idx. Returns
/// the closure node it lands on, or the boundary crossing with nb = -1.
ArmGeom probe(const GridProblem& pb, int idx, const DirGeom& dg, int sgn) {
    auto iv = pb.unindex(idx);
    bool inbox = true;
    for (int a = 0; a < pb.d; ++a) {
        iv[a] += sgn * dg.p[a];
        if (iv[a] < 0 || iv[a] >= pb.n) inbox = false;
    }
    if (inbox) {
        const int j = pb.index(iv);
        if (pb.inside[j] >= 0) return {dg.norm * pb.h, j};
    }
    const auto x = pb.point(idx);
    std::array<double, 3> e{};
    for (int a = 0; a < pb.d; ++a) e[a] = sgn * dg.e[a];
    double s = crossing_distance(pb, x, e);
    s = std::clamp(s, 1e-14, dg.norm * pb.h);
    return {s, -1};
}

ArmPair make_arm_pair(const GridProblem& pb, int idx, const DirGeom& dg) {
    const ArmGeom gp = probe(pb, idx, dg, +1);
    const ArmGeom gm = probe(pb, idx, dg, -1);
    ArmPair arm;
    arm.nb_p = gp.nb;
    arm.nb_m = gm.nb;
    const double tot = gp.delta + gm.delta;
    arm.c_p = 2.0 / (gp.delta * tot);
    arm.c_m = 2.0 / (gm.delta * tot);
    return arm;
}

/// Grid-wide stencil tables for one control net. Arm pairs are shared across
/// controls through the canonical direction list (sign-flipped so the first
/// nonzero component is positive; the pair is symmetric under the flip).
struct Stencil {
    int N = 0;
    std::vector<int> nodes;
    std::vector<int> color; // lattice parity, for the red-black sweeps
    std::vector<double> gpow;
    std::vector<DirGeom> dirs;
    std::vector<ArmPair> arms; // [dir * N + pos]
    std::vector<std::array<int, kMaxDim>> cdir; // control, frame axis -> dir id
};

Stencil build_stencil(const GridProblem& pb, const ControlNet& net) {
    Stencil st;
    st.N = static_cast<int>(pb.interior.size());
    st.nodes = pb.interior;
    st.color.resize(st.N);
    st.gpow.resize(st.N);
    const double pw = 1.0 - 1.0 / pb.m;
    for (int pos = 0; pos < st.N; ++pos) {
        const int idx = st.nodes[pos];
        const auto iv = pb.unindex(idx);
        st.color[pos] = (iv[0] + iv[1] + iv[2]) & 1;
        const double g = pb.g[idx];
        st.gpow[pos] = g == 0.0 ? 0.0 : std::exp(pw * std::log(g));
    }

    std::map<std::array<int, 3>, int> seen;
    st.cdir.resize(net.controls.size());
    for (size_t c = 0; c < net.controls.size(); ++c) {
        const Frame& fr = net.frames[net.controls[c].frame_id];
        for (int k = 0; k < pb.d; ++k) {
            std::array<int, 3> p{};
            for (int a = 0; a < pb.d; ++a) p[a] = fr.p[k][a];
            for (int a = 0; a < pb.d; ++a) {
                if (p[a] == 0) continue;
                if (p[a] < 0)
                    for (int b = 0; b < pb.d; ++b) p[b] = -p[b];
                break;
            }
            const auto [it, fresh] = seen.try_emplace(p, static_cast<int>(st.dirs.size()));
            if (fresh) st.dirs.push_back(make_dir(p.data(), pb.d));
            st.cdir[c][k] = it->second;
        }
    }

    st.arms.resize(st.dirs.size() * static_cast<size_t>(st.N));
    for (size_t j = 0; j < st.dirs.size(); ++j)
        for (int pos = 0; pos < st.N; ++pos)
            st.arms[j * st.N + pos] = make_arm_pair(pb, st.nodes[pos], st.dirs[j]);
    return st;
}

double control_value(const Stencil& st, const std::vector<double>& u, const Control& ctl,
                     const std::array<int, kMaxDim>& dmap, int pos, double u0, int d) {
    double val = 0.0;
    for (int k = 0; k < d; ++k) {
        const ArmPair& a = st.arms[static_cast<size_t>(dmap[k]) * st.N + pos];
        const double up = a.nb_p >= 0 ? u[a.nb_p] : 0.0;
        const double um = a.nb_m >= 0 ? u[a.nb_m] : 0.0;
        val += ctl.mu[k] * (a.c_p * up + a.c_m * um - (a.c_p + a.c_m) * u0);
    }
    return val - ctl.kappa * st.gpow[pos];
}

/// Value of u at the node that zeroes this control's equation, all other
/// values frozen. Denominator is positive: mu > 0 and both c's are positive.
double local_solve(const Stencil& st, const std::vector<double>& u, const Control& ctl,
                   const std::array<int, kMaxDim>& dmap, int pos, int d) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < d; ++k) {
        const ArmPair& a = st.arms[static_cast<size_t>(dmap[k]) * st.N + pos];
        const double up = a.nb_p >= 0 ? u[a.nb_p] : 0.0;
        const double um = a.nb_m >= 0 ? u[a.nb_m] : 0.0;
        num += ctl.mu[k] * (a.c_p * up + a.c_m * um);
        den += ctl.mu[k] * (a.c_p + a.c_m);
    }
    return (num - ctl.kappa * st.gpow[pos]) / den;
}

/// Pointwise policy improvement; returns the Bellman residual sup |min val|.
double improve(const Stencil& st, const ControlNet& net, const std::vector<double>& u,
               std::vector<int>& policy) {
    const int d = net.d;
    const int nc = static_cast<int>(net.controls.size());
    double resid = 0.0;
    for (int pos = 0; pos < st.N; ++pos) {
        const double u0 = u[st.nodes[pos]];
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int c = 0; c < nc; ++c) {
            const double val = control_value(st, u, net.controls[c], st.cdir[c], pos, u0, d);
            if (val < best) {
                best = val;
                arg = c;
            }
        }
        policy[pos] = arg;
        resid = std::max(resid, std::fabs(best));
    }
    return resid;
}

double frozen_residual(const Stencil& st, const ControlNet& net, const std::vector<double>& u,
                       const std::vector<int>& policy) {
    double resid = 0.0;
    for (int pos = 0; pos < st.N; ++pos) {
        const int c = policy[pos];
        const double val =
            control_value(st, u, net.controls[c], st.cdir[c], pos, u[st.nodes[pos]], net.d);
        resid = std::max(resid, std::fabs(val));
    }
    return resid;
}

void gs_sweep(const Stencil& st, const ControlNet& net, std::vector<double>& u,
              const std::vector<int>& policy) {
    for (int phase = 0; phase < 2; ++phase)
        for (int pos = 0; pos < st.N; ++pos) {
            if (st.color[pos] != phase) continue;
            const int c = policy[pos];
            u[st.nodes[pos]] = local_solve(st, u, net.controls[c], st.cdir[c], pos, net.d);
        }
}

void vi_sweep(const Stencil& st, const ControlNet& net, std::vector<double>& u) {
    const int nc = static_cast<int>(net.controls.size());
    for (int phase = 0; phase < 2; ++phase)
        for (int pos = 0; pos < st.N; ++pos) {
            if (st.color[pos] != phase) continue;
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < nc; ++c)
                best = std::min(best, local_solve(st, u, net.controls[c], st.cdir[c], pos, net.d));
            u[st.nodes[pos]] = best;
        }
}

void validate_net_for_grid(const GridProblem& pb, const ControlNet& net) {
    if (net.d != pb.d || net.m != pb.m)
        throw std::invalid_argument("solver: control net does not match the problem (d, m)");
    if (net.controls.empty()) throw std::invalid_argument("solver: empty control net");
    for (const Control& c : net.controls)
        if (c.frame_id < 0 || c.frame_id >= static_cast<int>(net.frames.size()))
            throw std::invalid_argument("solver: every control must carry a lattice frame");
}

} // namespace

Monitors solution_monitors(const GridProblem& pb, const std::vector<double>& u) {
    if (u.size() != static_cast<size_t>(pb.node_count()))
        throw std::invalid_argument("solution_monitors: u has the wrong length");
    Monitors mo;
    mo.assumption_grad_ok = pb.assumption_grad_ok;
    mo.assumption_worst_slack = pb.assumption_worst_slack;
    mo.assumption_gpos_ok = pb.assumption_gpos_ok;

    const double kiso = kappa(SymMat::identity(pb.d), pb.m);
    const double pw = 1.0 - 1.0 / pb.m;
    std::array<DirGeom, 3> axes{};
    for (int a = 0; a < pb.d; ++a) {
        int p[3] = {0, 0, 0};
        p[a] = 1;
        axes[a] = make_dir(p, pb.d);
    }

    double minnormal = std::numeric_limits<double>::infinity();
    double slack = std::numeric_limits<double>::infinity();
    double supu = -std::numeric_limits<double>::infinity();

    for (int idx : pb.interior) {
        const auto x = pb.point(idx);
        const double u0 = u[idx];
        supu = std::max(supu, u0);
        mo.barrier_ratio = std::max(mo.barrier_ratio, std::fabs(u0) / pb.psi(x));

        double lap = 0.0, nodemax = 0.0;
        bool cutnode = false;
        for (int a = 0; a < pb.d; ++a) {
            const ArmGeom gp = probe(pb, idx, axes[a], +1);
            const ArmGeom gm = probe(pb, idx, axes[a], -1);
            const double up = gp.nb >= 0 ? u[gp.nb] : 0.0;
            const double um = gm.nb >= 0 ? u[gm.nb] : 0.0;
            const double tot = gp.delta + gm.delta;
            const double d2 =
                2.0 * up / (gp.delta * tot) + 2.0 * um / (gm.delta * tot) - 2.0 * u0 / (gp.delta * gm.delta);
            lap += d2;
            nodemax = std::max(nodemax, std::fabs(d2));
            mo.max_gradient = std::max({mo.max_gradient, std::fabs(up - u0) / gp.delta,
                                        std::fabs(um - u0) / gm.delta});

            // Inward-quotient sample wherever the arm reaches the boundary
            // (cut arm, or the far node sits exactly on it). The alignment
            // division cancels the obliqueness of the arm to first order.
            for (int sgn : {+1, -1}) {
                const ArmGeom& g = sgn > 0 ? gp : gm;
                const bool reach = g.nb < 0 || pb.inside[g.nb] == 0;
                if (!reach) continue;
                cutnode = true;
                std::array<double, 3> y{}, eta{};
                for (int b = 0; b < pb.d; ++b) {
                    eta[b] = sgn * axes[a].e[b];
                    y[b] = x[b] + g.delta * eta[b];
                }
                double align = 0.0;
                if (pb.domain == DomainKind::Disc) {
                    double ny = 0.0;
                    for (int b = 0; b < pb.d; ++b) ny += y[b] * y[b];
                    ny = std::sqrt(ny);
                    if (ny > 0.0)
                        for (int b = 0; b < pb.d; ++b) align += eta[b] * y[b] / ny;
                } else {
                    for (int b = 0; b < pb.d; ++b)
                        if (std::fabs(y[b]) >= 1.0 - 1e-9)
                            align = std::max(align, eta[b] * (y[b] > 0.0 ? 1.0 : -1.0));
                }
                if (align >= 0.5)
                    minnormal = std::min(minnormal, (u0 / g.delta) / align);
            }
        }
        if (cutnode)
            mo.boundary_d2_max = std::max(mo.boundary_d2_max, nodemax);
        else
            mo.interior_d2_max = std::max(mo.interior_d2_max, nodemax);

        const double gv = pb.g[idx];
        const double gpw = gv == 0.0 ? 0.0 : std::exp(pw * std::log(gv));
        slack = std::min(slack, lap - pb.d * kiso * gpw);
    }

    mo.d2_ratio = mo.interior_d2_max / (1.0 + mo.boundary_d2_max);
    mo.min_boundary_normal = std::isfinite(minnormal) ? minnormal : 0.0;
    mo.subharmonic_slack = slack;
    mo.sup_u = supu;

    const AuditReport audit = admissibility_audit(pb, u);
    mo.admissibility_fraction = audit.fraction;
    mo.admissibility_worst = audit.worst_margin;
    return mo;
}

std::pair<double, int> discrete_bellman_operator(const GridProblem& pb, const ControlNet& net,
                                                 const std::vector<double>& u, int node) {
    validate_net_for_grid(pb, net);
    if (u.size() != static_cast<size_t>(pb.node_count()))
        throw std::invalid_argument("discrete_bellman_operator: u has the wrong length");
    if (node < 0 || node >= pb.node_count() || pb.inside[node] != 1)
        throw std::invalid_argument("discrete_bellman_operator: node is not interior");

    const double pw = 1.0 - 1.0 / pb.m;
    const double g = pb.g[node];
    const double gpow = g == 0.0 ? 0.0 : std::exp(pw * std::log(g));
    const double u0 = u[node];

    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (size_t c = 0; c < net.controls.size(); ++c) {
        const Control& ctl = net.controls[c];
        const Frame& fr = net.frames[ctl.frame_id];
        double val = -ctl.kappa * gpow;
        for (int k = 0; k < pb.d; ++k) {
            int p[3] = {0, 0, 0};
            for (int a = 0; a < pb.d; ++a) p[a] = fr.p[k][a];
            const ArmPair arm = make_arm_pair(pb, node, make_dir(p, pb.d));
            const double up = arm.nb_p >= 0 ? u[arm.nb_p] : 0.0;
            const double um = arm.nb_m >= 0 ? u[arm.nb_m] : 0.0;
            val += ctl.mu[k] * (arm.c_p * up + arm.c_m * um - (arm.c_p + arm.c_m) * u0);
        }
        if (val < best) {
            best = val;
            arg = static_cast<int>(c);
        }
    }
    return {best, arg};
}

SolveReport policy_iteration(const GridProblem& pb, const ControlNet& net,
                             const SolverOptions& opt) {
    validate_net_for_grid(pb, net);
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
    if (opt.max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
    const size_t total = static_cast<size_t>(pb.node_count());
    if (!opt.warm_start.empty() && opt.warm_start.size() != total)
        throw std::invalid_argument("solver: warm start has the wrong length");

    const Stencil st = build_stencil(pb, net);

    SolveReport rep;
    rep.u.assign(total, 0.0);
    if (!opt.warm_start.empty())
        for (int idx : pb.interior) {
            const double v = opt.warm_start[idx];
            if (!std::isfinite(v)) throw std::invalid_argument("solver: warm start is not finite");
            rep.u[idx] = v;
        }
    rep.policy.assign(st.N, 0);
    rep.degenerate_g_warning = pb.g_min <= 0.0;

    const long cap = 10000 + 5L * pb.n * pb.n; // sweeps per linear solve

    if (!opt.value_iteration) {
        for (int it = 0; it < opt.max_iters; ++it) {
            const double resid = improve(st, net, rep.u, rep.policy);
            rep.residual_history.push_back(resid);
            rep.iterations = it + 1;
            if (resid <= opt.tol) {
                rep.converged = true;
                break;
            }
            long sweeps = 0;
            bool inner_ok = false;
            while (sweeps < cap) {
                for (int s = 0; s < 4 && sweeps < cap; ++s, ++sweeps)
                    gs_sweep(st, net, rep.u, rep.policy);
                if (frozen_residual(st, net, rep.u, rep.policy) <= 0.1 * opt.tol) {
                    inner_ok = true;
                    break;
                }
            }
            if (!inner_ok)
                throw ConvergenceError("policy evaluation stalled before reaching tol/10",
                                       rep.residual_history);
        }
        if (!rep.converged)
            throw ConvergenceError("policy iteration did not reach the tolerance",
                                   rep.residual_history);
    } else {
        long sweeps = 0;
        while (sweeps < cap && !rep.converged) {
            for (int s = 0; s < 4 && sweeps < cap; ++s, ++sweeps) vi_sweep(st, net, rep.u);
            const double resid = improve(st, net, rep.u, rep.policy);
            rep.residual_history.push_back(resid);
            rep.iterations = static_cast<int>(sweeps);
            if (resid <= opt.tol) rep.converged = true;
        }
        if (!rep.converged)
            throw ConvergenceError("value iteration did not reach the tolerance",
                                   rep.residual_history);
    }

    rep.final_residual = rep.residual_history.back();
    rep.monitors = solution_monitors(pb, rep.u);
    return rep;
}

AuditReport admissibility_audit(const GridProblem& pb, const std::vector<double>& u) {
    if (u.size() != static_cast<size_t>(pb.node_count()))
        throw std::invalid_argument("admissibility_audit: u has the wrong length");

    AuditReport rep;
    double worst = std::numeric_limits<double>::infinity();
    const double h2 = pb.h * pb.h;
    const int zlo = pb.d == 3 ? -1 : 0, zhi = pb.d == 3 ? 1 : 0;

    for (int idx : pb.interior) {
        const auto iv = pb.unindex(idx);
        double val[3][3][3] = {};
        bool ok = true;
        for (int oz = zlo; oz <= zhi && ok; ++oz)
            for (int oy = -1; oy <= 1 && ok; ++oy)
                for (int ox = -1; ox <= 1 && ok; ++ox) {
                    std::array<int, 3> jv = {iv[0] + ox, iv[1] + oy, iv[2] + oz};
                    for (int a = 0; a < pb.d; ++a)
                        if (jv[a] < 0 || jv[a] >= pb.n) ok = false;
                    if (!ok) break;
                    const int j = pb.index(jv);
                    if (pb.inside[j] < 0) {
                        ok = false;
                        break;
                    }
                    val[ox + 1][oy + 1][oz + 1] = u[j];
                }
        if (!ok) continue;
        ++rep.audited;

        auto V = [&](int ox, int oy, int oz) { return val[ox + 1][oy + 1][oz + 1]; };
        SymMat H(pb.d);
        for (int a = 0; a < pb.d; ++a) {
            int op[3] = {0, 0, 0};
            op[a] = 1;
            H.set(a, a, (V(op[0], op[1], op[2]) - 2.0 * V(0, 0, 0) + V(-op[0], -op[1], -op[2])) / h2);
        }
        for (int a = 0; a < pb.d; ++a)
            for (int b = a + 1; b < pb.d; ++b) {
                int pp[3] = {0, 0, 0};
                pp[a] = 1;
                int qq[3] = {0, 0, 0};
                qq[b] = 1;
                const double cross =
                    (V(pp[0] + qq[0], pp[1] + qq[1], pp[2] + qq[2]) +
                     V(-pp[0] - qq[0], -pp[1] - qq[1], -pp[2] - qq[2]) -
                     V(pp[0] - qq[0], pp[1] - qq[1], pp[2] - qq[2]) -
                     V(-pp[0] + qq[0], -pp[1] + qq[1], -pp[2] + qq[2])) /
                    (4.0 * h2);
                H.set(a, b, cross);
            }

        const double tol = 1e-6 * std::max(1.0, H.max_abs());
        const Spectrum lam = eigenvalues(H);
        const double s = std::max(1.0, lam.max_abs() + tol);
        std::array<double, kMaxDim> sh{};
        for (int i = 0; i < pb.d; ++i) sh[i] = lam.values[i] + tol;
        std::array<double, kMaxDim + 1> e{};
        elem_sym_all({sh.data(), static_cast<size_t>(pb.d)}, e);
        double margin = std::numeric_limits<double>::infinity();
        double sk = 1.0;
        for (int k = 1; k <= pb.m; ++k) {
            sk *= s;
            margin = std::min(margin, e[k] / sk);
        }
        worst = std::min(worst, margin);
        if (margin >= -std::max(tol, 1e-9)) ++rep.passed;
    }

    rep.fraction = rep.audited > 0 ? static_cast<double>(rep.passed) / rep.audited : 1.0;
    rep.worst_margin = rep.audited > 0 ? worst : 0.0;
    return rep;
}

LadderReport degeneracy_ladder(const GridProblem& pb, const ControlNet& net,
                               const std::vector<int>& n_list, const SolverOptions& opt) {
    if (n_list.empty()) throw std::invalid_argument("ladder: empty n list");
    for (size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw std::invalid_argument("ladder: n must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("ladder: n list must be strictly increasing");
    }

    LadderReport rep;
    rep.n_list = n_list;
    SolverOptions ropt = opt;
    for (size_t r = 0; r < n_list.size(); ++r) {
        GridProblem pbn = pb;
        const double shift = 0.5 / n_list[r];
        for (double& gv : pbn.g) gv += shift;
        pbn.g_min += shift;
        pbn.g_max += shift;
        pbn.assumption_gpos_ok = pbn.g_max > 0.0 && 1.0 / pbn.g_max <= pbn.K;
        if (r > 0) ropt.warm_start = rep.rungs.back().u;
        try {
            rep.rungs.push_back(policy_iteration(pbn, net, ropt));
        } catch (const ConvergenceError& err) {
            throw LadderError("ladder rung n=" + std::to_string(n_list[r]) +
                                  " did not converge: " + err.what(),
                              std::move(rep));
        }
    }

    for (size_t r = 0; r + 1 < rep.rungs.size(); ++r) {
        double sup = 0.0;
        for (int idx : pb.interior)
            sup = std::max(sup, std::fabs(rep.rungs[r].u[idx] - rep.rungs[r + 1].u[idx]));
        rep.pairwise_sup.push_back(sup);
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t r = rep.rungs.size() / 2; r < rep.rungs.size(); ++r) {
        lo = std::min(lo, rep.rungs[r].monitors.interior_d2_max);
        hi = std::max(hi, rep.rungs[r].monitors.interior_d2_max);
    }
    rep.d2_variation = hi > 1e-12 ? (hi - lo) / hi : 0.0;
    rep.c11_surrogate_ok = rep.d2_variation <= 0.10;
    return rep;
}

} // namespace hb
