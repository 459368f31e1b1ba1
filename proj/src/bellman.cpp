#include "hb/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>

#include "hb/cone.hpp"
#include "hb/errors.hpp"
#include "hb/symfun.hpp"

namespace hb {

namespace {

int gcd_int(int a, int b) { return std::gcd(a, b); }

Frame make_frame(int dim, const std::array<std::array<int, kMaxDim>, kMaxDim>& p) {
    Frame f;
    f.dim = dim;
    f.p = p;
    for (int c = 0; c < dim; ++c) {
        double nrm = 0.0;
        for (int r = 0; r < dim; ++r) nrm += static_cast<double>(p[c][r]) * p[c][r];
        nrm = std::sqrt(nrm);
        for (int r = 0; r < dim; ++r) f.q[static_cast<size_t>(c) * kMaxDim + r] = p[c][r] / nrm;
    }
    return f;
}

/// d = 2: frames indexed by primitive vectors (a, b), a >= 1, b >= 0, i.e.
/// one representative per angle in [0, 90); the partner axis is (-b, a).
/// Enumerated by sup-norm radius, then by angle, so frame 0 is the axis frame
/// and frame 1 the 45-degree one.
std::vector<Frame> frames_2d(int count) {
    std::vector<Frame> out;
    for (int radius = 1; static_cast<int>(out.size()) < count && radius <= 64; ++radius) {
        std::vector<std::array<int, 2>> ring;
        for (int b = 0; b <= radius; ++b) ring.push_back({radius, b});
        for (int a = 1; a < radius; ++a) ring.push_back({a, radius});
        std::sort(ring.begin(), ring.end(), [](const auto& x, const auto& y) {
            return std::atan2(x[1], x[0]) < std::atan2(y[1], y[0]);
        });
        for (const auto& v : ring) {
            if (gcd_int(v[0], v[1]) != 1) continue;
            std::array<std::array<int, kMaxDim>, kMaxDim> p{};
            p[0] = {v[0], v[1]};
            p[1] = {-v[1], v[0]};
            out.push_back(make_frame(2, p));
            if (static_cast<int>(out.size()) == count) break;
        }
    }
    return out;
}

/// d = 3: axis frame, the three face-diagonal frames, and four frames with a
/// body-diagonal axis. All direction triples are mutually orthogonal integer
/// vectors, checked in the unit tests.
std::vector<Frame> frames_3d(int count) {
    static const int raw[8][3][3] = {
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
        {{1, 1, 0}, {-1, 1, 0}, {0, 0, 1}},
        {{1, 0, 1}, {0, 1, 0}, {-1, 0, 1}},
        {{1, 0, 0}, {0, 1, 1}, {0, -1, 1}},
        {{1, 1, 1}, {1, -1, 0}, {1, 1, -2}},
        {{1, 1, -1}, {1, -1, 0}, {1, 1, 2}},
        {{1, -1, 1}, {1, 1, 0}, {-1, 1, 2}},
        {{-1, 1, 1}, {1, 1, 0}, {-1, 1, -2}},
    };
    std::vector<Frame> out;
    for (int f = 0; f < std::min(count, 8); ++f) {
        std::array<std::array<int, kMaxDim>, kMaxDim> p{};
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r) p[c][r] = raw[f][c][r];
        out.push_back(make_frame(3, p));
    }
    return out;
}

/// d >= 4 (algebra-only dimensions): axis frame plus one 45-degree rotation
/// per coordinate plane.
std::vector<Frame> frames_nd(int d, int count) {
    std::vector<Frame> out;
    std::array<std::array<int, kMaxDim>, kMaxDim> axis{};
    for (int c = 0; c < d; ++c) axis[c][c] = 1;
    out.push_back(make_frame(d, axis));
    for (int i = 0; i < d && static_cast<int>(out.size()) < count; ++i)
        for (int j = i + 1; j < d && static_cast<int>(out.size()) < count; ++j) {
            auto p = axis;
            p[i] = {};
            p[j] = {};
            p[i][i] = 1;
            p[i][j] = 1;
            p[j][i] = -1;
            p[j][j] = 1;
            out.push_back(make_frame(d, p));
        }
    return out;
}

std::vector<Frame> frame_family(int d, int count) {
    if (d == 2) return frames_2d(count);
    if (d == 3) return frames_3d(count);
    return frames_nd(d, count);
}

using Profile = std::array<double, kMaxDim>;

double profile_margin(const Profile& rho, int d, int m) {
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all({rho.data(), static_cast<size_t>(d)}, e);
    double margin = e[1];
    for (int k = 2; k <= m; ++k) margin = std::min(margin, e[k]);
    return margin;
}

Profile iso_profile(int d) {
    Profile p{};
    for (int i = 0; i < d; ++i) p[i] = 1.0 / d;
    return p;
}

/// Walks from the isotropic profile toward pushing coordinate k negative
/// until the cone margin drops to `target`, staying on the trace-1 slice.
Profile near_boundary_profile(int d, int m, int k, double target) {
    const Profile iso = iso_profile(d);
    Profile dir{};
    for (int i = 0; i < d; ++i) dir[i] = (i == k) ? -1.0 : 1.0 / (d - 1);
    auto at = [&](double s) {
        Profile p{};
        for (int i = 0; i < d; ++i) p[i] = iso[i] + s * dir[i];
        return p;
    };
    double hi = 0.25;
    while (profile_margin(at(hi), d, m) > target && hi < 1e6) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (profile_margin(at(mid), d, m) > target)
            lo = mid;
        else
            hi = mid;
    }
    return at(lo);
}

std::vector<Profile> profile_list(int d, int m, int count, std::mt19937_64& rng) {
    const double floor = std::min(1e-3, 0.5 * profile_margin(iso_profile(d), d, m));
    std::vector<Profile> out;
    auto push = [&](const Profile& p) {
        if (static_cast<int>(out.size()) >= count) return;
        if (profile_margin(p, d, m) < floor) return;
        for (const auto& q : out) {
            double diff = 0.0;
            for (int i = 0; i < d; ++i) diff = std::max(diff, std::fabs(p[i] - q[i]));
            if (diff < 1e-12) return;
        }
        out.push_back(p);
    };

    if (d == 2) {
        // t(1-t) = floor gives the two profiles hugging the cone boundary.
        const double t_nb = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * floor));
        for (double t : {t_nb, 1.0 - t_nb, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75, 0.15, 0.85,
                         0.05, 0.95, 0.4, 0.6, 0.01, 0.99})
            push({t, 1.0 - t});
    } else {
        for (int k = 0; k < d; ++k) push(near_boundary_profile(d, m, k, floor));
        for (double u : {0.6, 0.85})
            for (int k = 0; k < d; ++k) {
                Profile p{};
                for (int i = 0; i < d; ++i) p[i] = (i == k) ? u : (1.0 - u) / (d - 1);
                push(p);
            }
        if (d >= 3)
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) {
                    Profile p{};
                    for (int q = 0; q < d; ++q)
                        p[q] = (q == i || q == j) ? 0.42 : (1.0 - 0.84) / (d - 2);
                    push(p);
                }
    }

    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 200000) {
        ++attempts;
        Profile p{};
        double tr = 0.0;
        for (int i = 0; i < d; ++i) {
            p[i] = 2.0 * unit() - 1.0;
            tr += p[i];
        }
        if (tr < 0.1) continue;
        bool huge = false;
        for (int i = 0; i < d; ++i) {
            p[i] /= tr;
            if (std::fabs(p[i]) > 20.0) huge = true;
        }
        if (!huge) push(p);
    }
    if (static_cast<int>(out.size()) < count)
        throw NumericError("build_control_net: could not sample enough admissible profiles");
    return out;
}

Control lattice_control(const Frame& frame, const Profile& rho, int frame_id, int d, int m) {
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all({rho.data(), static_cast<size_t>(d)}, e);
    const double pm = e[m], pm1 = e[m - 1];
    if (!(pm > 0.0) || !(pm1 > 0.0)) throw NumericError("control profile left the cone");

    Control c;
    c.frame_id = frame_id;
    c.w = SymMat(d);
    c.a = SymMat(d);
    const double denom = (d - m + 1) * pm1;
    std::array<double, kMaxDim> rest{};
    std::array<double, kMaxDim> col{};
    for (int k = 0; k < d; ++k) {
        int n = 0;
        for (int i = 0; i < d; ++i)
            if (i != k) rest[n++] = rho[i];
        c.mu[k] = elem_sym(std::span<const double>(rest.data(), static_cast<size_t>(n)), m - 1) / denom;
        if (!(c.mu[k] > 0.0)) throw NumericError("control diffusion lost positivity");
        for (int r = 0; r < d; ++r) col[r] = frame.qv(r, k);
        c.w.add_rank1({col.data(), static_cast<size_t>(d)}, rho[k]);
        c.a.add_rank1({col.data(), static_cast<size_t>(d)}, c.mu[k]);
    }
    c.kappa = static_cast<double>(m) / (d - m + 1) *
              std::exp((1.0 - 1.0 / m) * std::log(pm)) / pm1;
    return c;
}

} // namespace

double root_m(double c, int m) {
    if (c < 0.0) throw std::domain_error("root_m: negative argument");
    if (m < 1) throw std::invalid_argument("root_m: m must be positive");
    return c == 0.0 ? 0.0 : std::exp(std::log(c) / m);
}

SymMat normalized_coeff(const SymMat& w, int m) {
    SymMat k = k_matrix(w, m);
    const double tr = k.trace();
    if (!(tr > 0.0)) throw std::domain_error("normalized_coeff: w outside the open cone");
    return k * (1.0 / tr);
}

double kappa(const SymMat& w, int m) {
    const int d = w.dim();
    if (m < 2 || m > d) throw std::invalid_argument("kappa: m out of range");
    const Spectrum lambda = eigenvalues(w);
    const double pm = elem_sym(lambda, m), pm1 = elem_sym(lambda, m - 1);
    if (!(pm > 0.0) || !(pm1 > 0.0)) throw std::domain_error("kappa: w outside the open cone");
    return static_cast<double>(m) / (d - m + 1) * std::exp((1.0 - 1.0 / m) * std::log(pm)) / pm1;
}

double free_term(const SymMat& w, int m, double g_val) {
    if (g_val < 0.0) throw std::domain_error("free_term: negative g");
    const double gpow = g_val == 0.0 ? 0.0 : std::exp((1.0 - 1.0 / m) * std::log(g_val));
    return -kappa(w, m) * gpow;
}

ControlNet ControlNet::with_control(const SymMat& w) const {
    if (w.dim() != d) throw std::invalid_argument("with_control: dimension mismatch");
    const double tr = w.trace();
    if (!(tr > 0.0)) throw std::domain_error("with_control: nonpositive trace");
    const SymMat wn = w * (1.0 / tr);
    Control c;
    c.w = wn;
    c.a = normalized_coeff(wn, m);
    c.kappa = kappa(wn, m);
    c.frame_id = -1;
    ControlNet out = *this;
    out.controls.push_back(c);
    return out;
}

ControlNet build_control_net(int d, int m, int frames, int profiles, std::uint64_t seed) {
    if (d < 2 || d > kMaxDim) throw std::invalid_argument("build_control_net: d out of range");
    if (m < 2 || m > d) throw std::invalid_argument("build_control_net: m out of range");
    if (frames < 1) throw std::invalid_argument("build_control_net: frames must be >= 1");
    if (profiles < 1) throw std::invalid_argument("build_control_net: profiles must be >= 1");

    ControlNet net;
    net.d = d;
    net.m = m;
    net.seed = seed;
    net.frames = frame_family(d, frames);

    if (profiles > 1) {
        std::mt19937_64 rng(seed);
        const auto rhos = profile_list(d, m, profiles, rng);
        for (int f = 0; f < static_cast<int>(net.frames.size()); ++f)
            for (const auto& rho : rhos)
                net.controls.push_back(lattice_control(net.frames[f], rho, f, d, m));
    }
    net.controls.push_back(lattice_control(net.frames[0], iso_profile(d), 0, d, m));
    return net;
}

double bellman_residual(const SymMat& v, double c, const ControlNet& net) {
    if (v.dim() != net.d) throw std::invalid_argument("bellman_residual: dimension mismatch");
    if (!v.finite()) throw std::invalid_argument("bellman_residual: v not finite");
    if (c < 0.0) throw std::domain_error("bellman_residual: negative c");
    if (net.controls.empty()) throw std::invalid_argument("bellman_residual: empty net");
    const double croot = root_m(c, net.m);
    double best = std::numeric_limits<double>::infinity();
    for (const Control& ctl : net.controls)
        best = std::min(best, ctl.a.dot_trace(v) - ctl.kappa * croot);
    return best;
}

double concave_envelope_check(const SymMat& v, const ControlNet& net) {
    if (v.dim() != net.d) throw std::invalid_argument("concave_envelope_check: dimension mismatch");
    if (net.controls.empty()) throw std::invalid_argument("concave_envelope_check: empty net");
    double best = std::numeric_limits<double>::infinity();
    for (const Control& ctl : net.controls)
        best = std::min(best, ctl.a.dot_trace(v) / ctl.kappa);
    return best;
}

} // namespace hb
