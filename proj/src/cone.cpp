#include "hb/cone.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hb/symfun.hpp"

namespace hb {

namespace {

bool shifted_in_closed_cone(const Spectrum& lambda, int m, double t) {
    std::array<double, kMaxDim> shifted{};
    for (int i = 0; i < lambda.dim; ++i) shifted[i] = lambda.values[i] + t;
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all({shifted.data(), static_cast<size_t>(lambda.dim)}, e);
    for (int k = 1; k <= m; ++k)
        if (e[k] < 0.0) return false;
    return true;
}

double spectrum_cone_root(const Spectrum& lambda, int m) {
    const double r = 1.0 + lambda.max_abs();
    double lo = -r, hi = r;
    // Membership in the closed cone is monotone in the shift and flips at the
    // largest root of P_m, so plain bisection is exact up to rounding.
    for (int it = 0; it < 200 && hi - lo > 1e-17 * r; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shifted_in_closed_cone(lambda, m, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

bool spectrum_in_cone(const Spectrum& lambda, int k) {
    if (k < 1 || k > lambda.dim) throw std::invalid_argument("spectrum_in_cone: order out of range");
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all(lambda.span(), e);
    for (int j = 1; j <= k; ++j)
        if (!(e[j] > 0.0)) return false;
    return true;
}

ConeVerdict in_cone(const SymMat& w, int m) {
    const int d = w.dim();
    if (m < 2 || m > d) throw std::invalid_argument("in_cone: m out of range");
    const Spectrum lambda = eigenvalues(w);

    ConeVerdict v;
    v.inside = spectrum_in_cone(lambda, m);
    v.shift_root = spectrum_cone_root(lambda, m);

    const double tr = elem_sym(lambda, 1);
    double scale = tr > 0.0 ? tr : lambda.max_abs();
    if (scale <= 0.0) scale = 1.0; // zero matrix: margin 0
    std::array<double, kMaxDim> norm{};
    for (int i = 0; i < d; ++i) norm[i] = lambda.values[i] / scale;
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all({norm.data(), static_cast<size_t>(d)}, e);
    v.margin = e[1];
    for (int k = 2; k <= m; ++k) v.margin = std::min(v.margin, e[k]);
    return v;
}

bool admissible(const SymMat& w, int m, double tol) {
    const int d = w.dim();
    if (m < 2 || m > d) throw std::invalid_argument("admissible: m out of range");
    if (!(tol >= 0.0)) throw std::invalid_argument("admissible: tol must be nonnegative");
    const Spectrum lambda = eigenvalues(w);
    const double s = std::max(1.0, lambda.max_abs() + tol);

    std::array<double, kMaxDim> shifted{};
    for (int i = 0; i < d; ++i) shifted[i] = lambda.values[i] + tol;
    std::array<double, kMaxDim + 1> e{};
    elem_sym_all({shifted.data(), static_cast<size_t>(d)}, e);

    const double slack = std::max(tol, 1e-9);
    double sk = s;
    for (int k = 1; k <= m; ++k, sk *= s)
        if (e[k] < -slack * sk) return false;
    return true;
}

double cone_root(const SymMat& w, int m) {
    if (m < 2 || m > w.dim()) throw std::invalid_argument("cone_root: m out of range");
    return spectrum_cone_root(eigenvalues(w), m);
}

bool submatrix_cone_check(const SymMat& w, int m) {
    const int d = w.dim();
    if (d < 3) throw std::invalid_argument("submatrix_cone_check: dimension must be >= 3");
    if (m < 2 || m > d) throw std::invalid_argument("submatrix_cone_check: m out of range");
    for (int k = 0; k < d; ++k)
        if (!spectrum_in_cone(eigenvalues(w.minor_matrix(k)), m - 1)) return false;
    return true;
}

SymMat sample_cone_member(std::mt19937_64& rng, int d, int m) {
    if (d < 2 || d > kMaxDim || m < 2 || m > d) throw std::invalid_argument("sample_cone_member: bad d or m");
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    SymMat w(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) w.set(i, j, 2.0 * unit() - 1.0);
    const double eps = 0.05 + 0.55 * unit();
    const double shift = cone_root(w, m) + eps;
    for (int i = 0; i < d; ++i) w.set(i, i, w(i, i) + shift);
    return w;
}

} // namespace hb
