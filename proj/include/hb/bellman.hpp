#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hb/symmat.hpp"

namespace hb {

/// Orthogonal frame whose axes are integer lattice directions. Column k of q
/// is p[k] normalized; a second-difference stencil can step by exactly p[k].
struct Frame {
    int dim = 0;
    std::array<std::array<int, kMaxDim>, kMaxDim> p{};
    std::array<double, kMaxDim * kMaxDim> q{}; // column-major unit vectors

    [[nodiscard]] double qv(int row, int col) const { return q[static_cast<size_t>(col) * kMaxDim + row]; }
};

/// One Bellman control: w in the open cone with trace 1, its normalized
/// diffusion a(w) = K(w)/trace K(w), and the free-term factor kappa(w).
/// Lattice controls (frame_id >= 0) also carry the eigenvalues mu of a in
/// frame order, so a = sum_k mu_k e_k e_k^T exactly.
struct Control {
    SymMat w;
    SymMat a;
    double kappa = 0.0;
    int frame_id = -1;
    std::array<double, kMaxDim> mu{};
};

struct ControlNet {
    int d = 0;
    int m = 0;
    std::uint64_t seed = 0;
    std::vector<Frame> frames;
    std::vector<Control> controls;

    /// Copy of the net with one extra control derived from w (any cone member;
    /// normalized to trace 1 internally). The extra control has no frame.
    [[nodiscard]] ControlNet with_control(const SymMat& w) const;
};

/// c^(1/m) with c >= 0; exact 0 at c = 0.
[[nodiscard]] double root_m(double c, int m);

/// a(w) = K(w)/trace K(w). Requires w in the open cone (trace K > 0).
[[nodiscard]] SymMat normalized_coeff(const SymMat& w, int m);

/// kappa(w) = m (d-m+1)^{-1} P_m^{1-1/m}(w) / P_{m-1}(w); scale-invariant,
/// positive on the open cone.
[[nodiscard]] double kappa(const SymMat& w, int m);

/// Free term of the Bellman form: -kappa(w) g^{1-1/m}, g >= 0.
[[nodiscard]] double free_term(const SymMat& w, int m, double g_val);

/// Deterministic control net: `frames` lattice frames crossed with `profiles`
/// trace-1 eigenvalue profiles (margin >= 1e-3 in the cone), plus the lone
/// isotropic control w = I/d. profiles == 1 degenerates to the isotropic-only
/// net. frames is clamped to the built-in family size for d >= 3.
[[nodiscard]] ControlNet build_control_net(int d, int m, int frames, int profiles, std::uint64_t seed);

/// min over the net of trace(a(w) v) - kappa(w) c^(1/m). Nonnegative for
/// v in the closed cone with c = P_m(v); zero at the v-aligned control.
[[nodiscard]] double bellman_residual(const SymMat& v, double c, const ControlNet& net);

/// min over the net of the concave linearization trace(a(w) v)/kappa(w);
/// an upper envelope of P_m^(1/m)(v), tight at the v-aligned control.
[[nodiscard]] double concave_envelope_check(const SymMat& v, const ControlNet& net);

} // namespace hb
