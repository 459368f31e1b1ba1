#pragma once

#include <cstdint>
#include <random>

#include "hb/symmat.hpp"

namespace hb {

/// Membership report for the m-th symmetric cone (the component of
/// {P_m > 0} containing the identity, characterized by P_1..P_m > 0).
struct ConeVerdict {
    bool inside = false;
    /// min over k <= m of P_k of the trace-1 normalized spectrum; positive
    /// iff strictly inside. For nonpositive-trace input the spectrum is
    /// normalized by its sup norm instead (trace scaling would flip signs).
    double margin = 0.0;
    /// Largest t with P_m(w + t I) = 0; w + t I is in the open cone for t > root.
    double shift_root = 0.0;
};

/// Spectrum-level chain test, 1 <= k <= dim: all of P_1..P_k strictly positive.
[[nodiscard]] bool spectrum_in_cone(const Spectrum& lambda, int k);

/// Full verdict for a symmetric matrix. Requires 2 <= m <= dim.
[[nodiscard]] ConeVerdict in_cone(const SymMat& w, int m);

/// Closure test with slack: true iff the spectrum of w + tol*I keeps every
/// P_k (k <= m) above -max(tol, 1e-9) * s^k, s = max(1, |lambda|_inf + tol).
/// tol >= 0; tol = 0 still allows the 1e-9 floating-point floor.
[[nodiscard]] bool admissible(const SymMat& w, int m, double tol);

/// Largest real root of t -> P_m(lambda(w) + t). Bisection on the monotone
/// closed-cone predicate over [-(1 + |lambda|_inf), 1 + |lambda|_inf]; the
/// predicate flips exactly at the largest root, double roots included.
[[nodiscard]] double cone_root(const SymMat& w, int m);

/// Every (dim-1) principal submatrix lies in the order-(m-1) cone of
/// dimension dim-1. Requires 3 <= dim and 2 <= m <= dim.
[[nodiscard]] bool submatrix_cone_check(const SymMat& w, int m);

/// Seeded rejection sampler: symmetric entries uniform in [-1, 1], then
/// shifted by (cone_root + eps) * I with eps drawn in [0.05, 0.6]. Every
/// returned matrix passes in_cone strictly.
[[nodiscard]] SymMat sample_cone_member(std::mt19937_64& rng, int d, int m);

} // namespace hb
