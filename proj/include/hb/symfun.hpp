#pragma once

#include <span>

#include "hb/symmat.hpp"

namespace hb {

/// k-th elementary symmetric polynomial of the eigenvalue list.
/// Stable coefficient recurrence, O(dim * k); k in [0, dim], P_0 = 1.
[[nodiscard]] double elem_sym(const Spectrum& lambda, int k);

/// Raw-span variant used by internal hot paths; same contract.
[[nodiscard]] double elem_sym(std::span<const double> lambda, int k);

/// All elementary symmetric values P_0..P_dim in one pass.
void elem_sym_all(std::span<const double> lambda, std::span<double> out);

/// P_m of a symmetric matrix via its spectrum. Requires 2 <= m <= dim.
[[nodiscard]] double pm_matrix(const SymMat& w, int m);

/// Gradient matrix K(v) of v -> P_m(v): the symmetric matrix with
/// trace(K(v) w) = d/dt P_m(v + t w) for every symmetric w. Spectral form:
/// K = Q diag(P_{m-1} of the other eigenvalues) Q^T. Requires 2 <= m <= dim.
[[nodiscard]] SymMat k_matrix(const SymMat& v, int m);

/// Slope of the (exactly linear) map t -> P_m(v + t eta eta^T) for unit eta.
/// Evaluated both as a plus/minus-1 difference quotient and as eta^T K(v) eta;
/// throws NumericError if the two routes disagree beyond 1e-8 * scale.
[[nodiscard]] double directional_linear_coeff(const SymMat& v, std::span<const double> eta, int m);

} // namespace hb
