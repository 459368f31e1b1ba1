#pragma once

#include <cstdint>
#include <span>

#include "hb/symmat.hpp"

namespace hb {

/// Outcome of a randomized inequality sweep. `worst_slack` is the largest
/// scale-normalized amount by which the tested inequality was exceeded;
/// negative means it always held with room to spare.
struct ViolationReport {
    long cases = 0;
    long violations = 0;
    double worst_slack = 0.0;
    [[nodiscard]] bool pass() const { return violations == 0; }
};

/// G(w, l) = sum_{k=0}^{m-1} l_k^{m-k} (P_k / P_m)(w) for w in the open cone
/// and nonnegative weights l of length m.
[[nodiscard]] double g_value(const SymMat& w, std::span<const double> l, int m);

/// Same shape with general powers: sum_k l_k^{p_k} (P_k / P_m)(w).
/// Requires p_k >= m - k (the convexity threshold for each term).
[[nodiscard]] double g_value_powers(const SymMat& w, std::span<const double> l,
                                    std::span<const double> p, int m);

/// Midpoint quasiconvexity sweep of G over random cone/weight pairs:
/// G(midpoint) <= max(G_1, G_2) + 1e-9 * scale.
[[nodiscard]] ViolationReport quasiconvexity_check(int d, int m, long pairs, std::uint64_t seed);

/// Same sweep for the general-power variant.
[[nodiscard]] ViolationReport f_k_quasiconvexity_check(int d, int m, std::span<const double> powers,
                                                       long pairs, std::uint64_t seed);

/// Convexity of H(x, y) = ((x+y)^n - x^n)^{-1} on (0, 10]^2: finite-difference
/// Hessians on a grid (eigenvalues >= -1e-7 at h = 1e-3), plus midpoint
/// convexity of the degree-lifted l^{n+1} H(x, y) on random triples.
[[nodiscard]] ViolationReport scalar_convexity_check(double n, int grid_points);

} // namespace hb
