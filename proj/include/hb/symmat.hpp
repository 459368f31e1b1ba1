#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace hb {

/// Hard dimension cap. Everything downstream (stack storage, the Jacobi
/// eigensolver, subset enumeration) relies on matrices staying tiny.
inline constexpr int kMaxDim = 6;

inline constexpr int packed_size(int d) { return d * (d + 1) / 2; }

/// Sorted eigenvalue list of a symmetric matrix, ascending.
struct Spectrum {
    int dim = 0;
    std::array<double, kMaxDim> values{};

    /// Sorts and validates; rejects dim outside [1, kMaxDim] and non-finite values.
    static Spectrum from_values(std::span<const double> v);

    [[nodiscard]] std::span<const double> span() const { return {values.data(), static_cast<size_t>(dim)}; }
    [[nodiscard]] double max_abs() const;
};

/// Dense symmetric matrix, packed lower triangle, dimension <= kMaxDim.
/// Value type: fits in two cache lines, no allocation.
class SymMat {
  public:
    SymMat() = default;
    explicit SymMat(int dim);

    [[nodiscard]] int dim() const { return dim_; }

    [[nodiscard]] double operator()(int i, int j) const { return packed_[idx(i, j)]; }
    void set(int i, int j, double v) { packed_[idx(i, j)] = v; }

    static SymMat identity(int dim);
    static SymMat diagonal(std::span<const double> d);

    SymMat& operator+=(const SymMat& o);
    SymMat& operator*=(double s);
    friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
    friend SymMat operator*(SymMat a, double s) { return a *= s; }
    friend SymMat operator*(double s, SymMat a) { return a *= s; }

    /// Adds s * (eta eta^T); eta must have dim() entries.
    void add_rank1(std::span<const double> eta, double s);

    /// trace(A * B) for symmetric A, B of equal dimension.
    [[nodiscard]] double dot_trace(const SymMat& o) const;

    [[nodiscard]] double trace() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] bool finite() const;

    /// eta^T A eta.
    [[nodiscard]] double quad_form(std::span<const double> eta) const;

    /// Principal submatrix with row/column k deleted.
    [[nodiscard]] SymMat minor_matrix(int k) const;

  private:
    [[nodiscard]] int idx(int i, int j) const;

    int dim_ = 0;
    std::array<double, packed_size(kMaxDim)> packed_{};
};

/// Eigendecomposition A = Q diag(lambda) Q^T with lambda ascending and
/// q stored column-major (column k = eigenvector of values[k]).
struct EigenSystem {
    Spectrum spectrum;
    int dim = 0;
    std::array<double, kMaxDim * kMaxDim> q{};

    [[nodiscard]] double vec(int row, int col) const { return q[static_cast<size_t>(col) * kMaxDim + row]; }
};

/// Cyclic Jacobi rotations. Terminates when the off-diagonal Frobenius norm
/// drops below 1e-13 * max(1, |A|_F); throws NumericError if 60 sweeps do not
/// get there (cannot happen for dim <= 6 with finite input, but checked).
EigenSystem eigensolve(const SymMat& a);

/// Eigenvalues only; same algorithm without accumulating Q.
Spectrum eigenvalues(const SymMat& a);

} // namespace hb
