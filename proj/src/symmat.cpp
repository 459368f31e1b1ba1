#include "hb/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hb/errors.hpp"

namespace hb {

Spectrum Spectrum::from_values(std::span<const double> v) {
    if (v.empty() || v.size() > kMaxDim)
        throw std::invalid_argument("spectrum dimension out of range");
    Spectrum s;
    s.dim = static_cast<int>(v.size());
    for (int i = 0; i < s.dim; ++i) {
        if (!std::isfinite(v[i])) throw std::invalid_argument("spectrum value not finite");
        s.values[i] = v[i];
    }
    std::sort(s.values.begin(), s.values.begin() + s.dim);
    return s;
}

double Spectrum::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::fabs(values[i]));
    return m;
}

SymMat::SymMat(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("SymMat dimension out of range");
}

int SymMat::idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw std::invalid_argument("SymMat index out of range");
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
}

SymMat SymMat::identity(int dim) {
    SymMat m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMat SymMat::diagonal(std::span<const double> d) {
    SymMat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim_; ++i) m.set(i, i, d[i]);
    return m;
}

SymMat& SymMat::operator+=(const SymMat& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("SymMat dimension mismatch");
    for (int k = 0; k < packed_size(dim_); ++k) packed_[k] += o.packed_[k];
    return *this;
}

SymMat& SymMat::operator*=(double s) {
    for (int k = 0; k < packed_size(dim_); ++k) packed_[k] *= s;
    return *this;
}

void SymMat::add_rank1(std::span<const double> eta, double s) {
    if (static_cast<int>(eta.size()) != dim_) throw std::invalid_argument("rank-1 vector dimension mismatch");
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j <= i; ++j) packed_[i * (i + 1) / 2 + j] += s * eta[i] * eta[j];
}

double SymMat::dot_trace(const SymMat& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("SymMat dimension mismatch");
    double t = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j <= i; ++j) {
            double term = packed_[i * (i + 1) / 2 + j] * o.packed_[i * (i + 1) / 2 + j];
            t += (i == j) ? term : 2.0 * term;
        }
    return t;
}

double SymMat::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double SymMat::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < packed_size(dim_); ++k) m = std::max(m, std::fabs(packed_[k]));
    return m;
}

bool SymMat::finite() const {
    for (int k = 0; k < packed_size(dim_); ++k)
        if (!std::isfinite(packed_[k])) return false;
    return true;
}

double SymMat::quad_form(std::span<const double> eta) const {
    if (static_cast<int>(eta.size()) != dim_) throw std::invalid_argument("quad_form vector dimension mismatch");
    double t = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) t += eta[i] * (*this)(i, j) * eta[j];
    return t;
}

SymMat SymMat::minor_matrix(int k) const {
    if (dim_ < 2) throw std::invalid_argument("minor of 1x1 matrix");
    if (k < 0 || k >= dim_) throw std::invalid_argument("minor index out of range");
    SymMat m(dim_ - 1);
    for (int i = 0, ii = 0; i < dim_; ++i) {
        if (i == k) continue;
        for (int j = 0, jj = 0; j <= i; ++j) {
            if (j == k) continue;
            m.set(ii, jj, (*this)(i, j));
            ++jj;
        }
        ++ii;
    }
    return m;
}

namespace {

// Work on a dense column-major copy; n <= 6 so everything stays on the stack.
struct Dense {
    int n;
    std::array<double, kMaxDim * kMaxDim> a{};
    double& at(int i, int j) { return a[static_cast<size_t>(j) * kMaxDim + i]; }
    [[nodiscard]] double at(int i, int j) const { return a[static_cast<size_t>(j) * kMaxDim + i]; }
};

double off_diag_norm(const Dense& d) {
    double s = 0.0;
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
            if (i != j) s += d.at(i, j) * d.at(i, j);
    return std::sqrt(s);
}

double frobenius(const Dense& d) {
    double s = 0.0;
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) s += d.at(i, j) * d.at(i, j);
    return std::sqrt(s);
}

EigenSystem jacobi(const SymMat& m, bool want_vectors) {
    if (!m.finite()) throw std::invalid_argument("eigensolve: matrix not finite");
    const int n = m.dim();
    Dense a{n, {}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.at(i, j) = m(i, j);

    Dense q{n, {}};
    for (int i = 0; i < n; ++i) q.at(i, i) = 1.0;

    const double tol = 1e-13 * std::max(1.0, frobenius(a));
    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    while (off_diag_norm(a) > tol) {
        if (++sweep > kMaxSweeps) throw NumericError("jacobi eigensolver did not converge");
        for (int p = 0; p < n - 1; ++p)
            for (int r = p + 1; r < n; ++r) {
                const double apr = a.at(p, r);
                if (apr == 0.0) continue;
                // Classic stable rotation: tan(theta) via the smaller root.
                const double theta = (a.at(r, r) - a.at(p, p)) / (2.0 * apr);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a.at(k, p), akr = a.at(k, r);
                    a.at(k, p) = c * akp - s * akr;
                    a.at(k, r) = s * akp + c * akr;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a.at(p, k), ark = a.at(r, k);
                    a.at(p, k) = c * apk - s * ark;
                    a.at(r, k) = s * apk + c * ark;
                }
                if (want_vectors)
                    for (int k = 0; k < n; ++k) {
                        const double qkp = q.at(k, p), qkr = q.at(k, r);
                        q.at(k, p) = c * qkp - s * qkr;
                        q.at(k, r) = s * qkp + c * qkr;
                    }
            }
    }

    std::array<int, kMaxDim> order{};
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n,
              [&](int x, int y) { return a.at(x, x) < a.at(y, y); });

    EigenSystem out;
    out.dim = n;
    std::array<double, kMaxDim> vals{};
    for (int i = 0; i < n; ++i) vals[i] = a.at(order[i], order[i]);
    out.spectrum = Spectrum::from_values({vals.data(), static_cast<size_t>(n)});
    if (want_vectors)
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                out.q[static_cast<size_t>(col) * kMaxDim + row] = q.at(row, order[col]);
    return out;
}

} // namespace

EigenSystem eigensolve(const SymMat& a) { return jacobi(a, true); }

Spectrum eigenvalues(const SymMat& a) { return jacobi(a, false).spectrum; }

} // namespace hb
