#include "hb/symfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hb/errors.hpp"

namespace hb {

void elem_sym_all(std::span<const double> lambda, std::span<double> out) {
    const int d = static_cast<int>(lambda.size());
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("elem_sym: dimension out of range");
    if (static_cast<int>(out.size()) < d + 1) throw std::invalid_argument("elem_sym: output too small");
    out[0] = 1.0;
    for (int k = 1; k <= d; ++k) out[k] = 0.0;
    // Incorporate one eigenvalue at a time; downward k keeps the update in place.
    for (int i = 0; i < d; ++i)
        for (int k = std::min(i + 1, d); k >= 1; --k) out[k] += lambda[i] * out[k - 1];
}

double elem_sym(std::span<const double> lambda, int k) {
    const int d = static_cast<int>(lambda.size());
    if (k < 0 || k > d) throw std::invalid_argument("elem_sym: k out of range");
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all(lambda, e);
    return e[k];
}

double elem_sym(const Spectrum& lambda, int k) { return elem_sym(lambda.span(), k); }

double pm_matrix(const SymMat& w, int m) {
    if (m < 2 || m > w.dim()) throw std::invalid_argument("pm_matrix: m out of range");
    return elem_sym(eigenvalues(w), m);
}

SymMat k_matrix(const SymMat& v, int m) {
    const int d = v.dim();
    if (m < 2 || m > d) throw std::invalid_argument("k_matrix: m out of range");
    const EigenSystem es = eigensolve(v);
    // dP_i = P_{m-1} of the spectrum with lambda_i removed. Recomputed per i
    // rather than divided out of the full P's; no cancellation.
    std::array<double, kMaxDim> rest{}, dp{};
    for (int i = 0; i < d; ++i) {
        int n = 0;
        for (int j = 0; j < d; ++j)
            if (j != i) rest[n++] = es.spectrum.values[j];
        dp[i] = elem_sym(std::span<const double>(rest.data(), static_cast<size_t>(n)), m - 1);
    }
    SymMat k(d);
    std::array<double, kMaxDim> col{};
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < d; ++r) col[r] = es.vec(r, i);
        k.add_rank1({col.data(), static_cast<size_t>(d)}, dp[i]);
    }
    return k;
}

double directional_linear_coeff(const SymMat& v, std::span<const double> eta, int m) {
    const int d = v.dim();
    if (static_cast<int>(eta.size()) != d) throw std::invalid_argument("directional_linear_coeff: eta dimension mismatch");
    double nrm2 = 0.0;
    for (double e : eta) nrm2 += e * e;
    if (std::fabs(std::sqrt(nrm2) - 1.0) > 1e-8)
        throw std::invalid_argument("directional_linear_coeff: eta not unit length");

    const double via_gradient = k_matrix(v, m).quad_form(eta);

    // P_m(v + t eta eta^T) is affine in t, so a centered +/-1 quotient is exact.
    SymMat plus = v, minus = v;
    plus.add_rank1(eta, 1.0);
    minus.add_rank1(eta, -1.0);
    const double via_difference = 0.5 * (pm_matrix(plus, m) - pm_matrix(minus, m));

    const double scale = std::max({1.0, std::fabs(via_gradient), std::fabs(via_difference)});
    if (std::fabs(via_gradient - via_difference) > 1e-8 * scale)
        throw NumericError("directional_linear_coeff: gradient and difference routes disagree");
    return via_gradient;
}

} // namespace hb
