#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hb {

/// One randomized property check, aggregated over its sample sweep.
/// worst_slack follows the ViolationReport convention: the largest
/// scale-normalized excess over the tested inequality, negative when the
/// property held everywhere with room to spare.
struct PropResult {
    std::string name;
    long cases = 0;
    long violations = 0;
    double worst_slack = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

/// Structural identities and inequalities of the symmetric-function layer:
/// gradient trace and equivariance, homogeneity, root superadditivity, cone
/// nesting and convexity along rays to the identity, the submatrix principle,
/// positivity of the gradient pairing, concavity of P_m/P_{m-1}, and the
/// Newton log-concavity chain. Cycles through every (d, m), 2 <= m <= d <= 6.
[[nodiscard]] std::vector<PropResult> run_algebra_suite(long trials, std::uint64_t seed);

/// Inequalities of the Bellman reformulation over finite control nets:
/// residual sign on the closed cone, tightness at the aligned control, scale
/// invariance of the normalized diffusion, the concave upper envelope, net
/// refinement monotonicity, and the frozen flat-boundary value.
[[nodiscard]] std::vector<PropResult> run_bellman_suite(long trials, std::uint64_t seed);

/// Quasiconvexity sweeps of the weighted cone ratios for the given (d, m)
/// pairs, the general-power variant where m = 2, and the scalar kernel
/// convexity checks that back them.
[[nodiscard]] std::vector<PropResult> run_quasi_suite(long pairs, std::uint64_t seed,
                                                      std::span<const std::array<int, 2>> dims);

} // namespace hb
