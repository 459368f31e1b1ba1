#include "hb/quasi.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hb/cone.hpp"
#include "hb/symfun.hpp"

namespace hb {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

double g_value_impl(const SymMat& w, std::span<const double> l, std::span<const double> p, int m) {
    const int d = w.dim();
    if (m < 2 || m > d) throw std::invalid_argument("g_value: m out of range");
    if (static_cast<int>(l.size()) != m) throw std::invalid_argument("g_value: weight vector must have m entries");
    for (double lk : l)
        if (!(lk >= 0.0)) throw std::domain_error("g_value: negative weight");

    std::array<double, kMaxDim + 1> e{};
    elem_sym_all(eigenvalues(w).span(), e);
    for (int k = 1; k <= m; ++k)
        if (!(e[k] > 0.0)) throw std::domain_error("g_value: w outside the open cone");

    double total = 0.0;
    for (int k = 0; k < m; ++k) total += std::pow(l[k], p[k]) * e[k] / e[m];
    return total;
}

} // namespace

double g_value(const SymMat& w, std::span<const double> l, int m) {
    std::array<double, kMaxDim> p{};
    for (int k = 0; k < m; ++k) p[k] = static_cast<double>(m - k);
    return g_value_impl(w, l, {p.data(), static_cast<size_t>(m)}, m);
}

double g_value_powers(const SymMat& w, std::span<const double> l, std::span<const double> p, int m) {
    if (static_cast<int>(p.size()) != m) throw std::invalid_argument("g_value_powers: powers must have m entries");
    for (int k = 0; k < m; ++k)
        if (!(p[k] >= static_cast<double>(m - k)))
            throw std::invalid_argument("g_value_powers: power below the convexity threshold m-k");
    return g_value_impl(w, l, p, m);
}

namespace {

ViolationReport midpoint_sweep(int d, int m, std::span<const double> powers, long pairs,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ViolationReport rep;
    rep.worst_slack = -std::numeric_limits<double>::infinity();
    std::array<double, kMaxDim> l1{}, l2{}, lm{};
    auto eval = [&](const SymMat& w, std::span<const double> l) {
        return powers.empty() ? g_value(w, l, m) : g_value_powers(w, l, powers, m);
    };
    for (long i = 0; i < pairs; ++i) {
        const SymMat w1 = sample_cone_member(rng, d, m);
        const SymMat w2 = sample_cone_member(rng, d, m);
        for (int k = 0; k < m; ++k) {
            l1[k] = log_uniform(rng, 1e-3, 10.0);
            l2[k] = log_uniform(rng, 1e-3, 10.0);
            lm[k] = 0.5 * (l1[k] + l2[k]);
        }
        const SymMat wm = (w1 + w2) * 0.5;
        const std::span<const double> s1{l1.data(), static_cast<size_t>(m)};
        const std::span<const double> s2{l2.data(), static_cast<size_t>(m)};
        const std::span<const double> sm{lm.data(), static_cast<size_t>(m)};
        const double g1 = eval(w1, s1), g2 = eval(w2, s2), gm = eval(wm, sm);
        const double scale = std::max({1.0, std::fabs(g1), std::fabs(g2), std::fabs(gm)});
        const double slack = (gm - std::max(g1, g2)) / scale;
        rep.worst_slack = std::max(rep.worst_slack, slack);
        if (slack > 1e-9) ++rep.violations;
        ++rep.cases;
    }
    return rep;
}

} // namespace

ViolationReport quasiconvexity_check(int d, int m, long pairs, std::uint64_t seed) {
    return midpoint_sweep(d, m, {}, pairs, seed);
}

ViolationReport f_k_quasiconvexity_check(int d, int m, std::span<const double> powers, long pairs,
                                         std::uint64_t seed) {
    if (static_cast<int>(powers.size()) != m)
        throw std::invalid_argument("f_k_quasiconvexity_check: powers must have m entries");
    for (int k = 0; k < m; ++k)
        if (!(powers[k] >= static_cast<double>(m - k)))
            throw std::invalid_argument("f_k_quasiconvexity_check: power below m-k");
    return midpoint_sweep(d, m, powers, pairs, seed);
}

ViolationReport scalar_convexity_check(double n, int grid_points) {
    if (!(n > 0.0)) throw std::invalid_argument("scalar_convexity_check: n must be positive");
    if (grid_points < 2 || grid_points > 5000)
        throw std::invalid_argument("scalar_convexity_check: grid_points out of range");

    auto H = [n](double x, double y) {
        return 1.0 / (std::pow(x + y, n) - std::pow(x, n));
    };

    ViolationReport rep;
    rep.worst_slack = -std::numeric_limits<double>::infinity();
    const double fd = 1e-3;
    for (int i = 1; i <= grid_points; ++i)
        for (int j = 1; j <= grid_points; ++j) {
            const double x = 10.0 * i / grid_points, y = 10.0 * j / grid_points;
            const double hxx = (H(x + fd, y) - 2.0 * H(x, y) + H(x - fd, y)) / (fd * fd);
            const double hyy = (H(x, y + fd) - 2.0 * H(x, y) + H(x, y - fd)) / (fd * fd);
            const double hxy = (H(x + fd, y + fd) - H(x + fd, y - fd) - H(x - fd, y + fd) +
                                H(x - fd, y - fd)) /
                               (4.0 * fd * fd);
            const double min_eig =
                0.5 * (hxx + hyy) - std::sqrt(0.25 * (hxx - hyy) * (hxx - hyy) + hxy * hxy);
            rep.worst_slack = std::max(rep.worst_slack, -min_eig);
            if (min_eig < -1e-7) ++rep.violations;
            ++rep.cases;
        }

    // Degree lift: l^{n+1} H(x, y) is jointly convex; midpoint test on random
    // triples, deterministic seed.
    std::mt19937_64 rng(0x11AA22BB);
    auto lifted = [&](double x, double y, double l) { return std::pow(l, n + 1.0) * H(x, y); };
    const long lift_pairs = static_cast<long>(grid_points) * grid_points;
    for (long t = 0; t < lift_pairs; ++t) {
        const double x1 = uniform(rng, 0.05, 10.0), y1 = uniform(rng, 0.05, 10.0);
        const double x2 = uniform(rng, 0.05, 10.0), y2 = uniform(rng, 0.05, 10.0);
        const double l1 = uniform(rng, 0.05, 10.0), l2 = uniform(rng, 0.05, 10.0);
        const double lhs = lifted(0.5 * (x1 + x2), 0.5 * (y1 + y2), 0.5 * (l1 + l2));
        const double rhs = 0.5 * (lifted(x1, y1, l1) + lifted(x2, y2, l2));
        const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        const double slack = (lhs - rhs) / scale;
        rep.worst_slack = std::max(rep.worst_slack, slack);
        if (slack > 1e-9) ++rep.violations;
        ++rep.cases;
    }
    return rep;
}

} // namespace hb
