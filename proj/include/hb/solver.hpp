#pragma once

#include <utility>
#include <vector>

#include "hb/bellman.hpp"
#include "hb/errors.hpp"
#include "hb/grid.hpp"

namespace hb {

/// Post-solve diagnostics. Second-difference monitors split interior nodes
/// into cut nodes (some axis arm truncated by the boundary) and deep ones.
struct Monitors {
    double barrier_ratio = 0.0;      // sup |u| / psi over interior nodes
    double max_gradient = 0.0;       // max axis difference quotient, cut arms included
    double interior_d2_max = 0.0;    // max |axis second difference|, deep nodes
    double boundary_d2_max = 0.0;    // same over cut nodes
    double d2_ratio = 0.0;           // interior_d2_max / (1 + boundary_d2_max)
    double min_boundary_normal = 0.0; // most negative inward quotient u(node)/delta/(eta.n)
    double subharmonic_slack = 0.0;  // min of Laplacian - d kappa_iso g^{1-1/m} (>= -d tol)
    double sup_u = 0.0;              // max over interior (zero boundary data: expect <= 0)
    double admissibility_fraction = 0.0;
    double admissibility_worst = 0.0;
    bool assumption_grad_ok = true;
    double assumption_worst_slack = 0.0;
    bool assumption_gpos_ok = true;
};

struct SolveReport {
    std::vector<double> u; // all box nodes; zero outside the open domain
    std::vector<int> policy; // control index per interior node (interior list order)
    std::vector<double> residual_history;
    int iterations = 0;
    bool converged = false;
    double final_residual = 0.0;
    bool degenerate_g_warning = false; // inf g = 0 solved directly (use the ladder)
    Monitors monitors;
};

struct SolverOptions {
    double tol = 1e-9;
    int max_iters = 100;
    bool value_iteration = false;  // diagnostic fallback instead of Howard
    std::vector<double> warm_start; // full box-node vector, optional
};

struct AuditReport {
    long audited = 0;
    long passed = 0;
    double fraction = 0.0;
    double worst_margin = 0.0;
};

struct LadderReport {
    std::vector<int> n_list;
    std::vector<SolveReport> rungs;
    std::vector<double> pairwise_sup; // sup |u_r - u_{r+1}| over interior
    double d2_variation = 0.0;        // relative spread of interior_d2_max, top half
    bool c11_surrogate_ok = false;    // d2_variation <= 0.10
};

struct LadderError : std::runtime_error {
    LadderReport partial;
    LadderError(const std::string& what, LadderReport p)
        : std::runtime_error(what), partial(std::move(p)) {}
};

/// One Bellman operator evaluation at an interior node under the grid
/// function u (box-node vector): min over the net of the discretized
/// drift-free operator plus free term; returns {value, argmin index}.
[[nodiscard]] std::pair<double, int> discrete_bellman_operator(const GridProblem& pb,
                                                               const ControlNet& net,
                                                               const std::vector<double>& u,
                                                               int node);

/// Howard policy iteration: alternate pointwise policy improvement with
/// red-black Gauss-Seidel solves of the frozen linear system (inner
/// tolerance tol/10). Throws ConvergenceError with the residual history if
/// the Bellman residual fails to reach tol in max_iters improvements.
[[nodiscard]] SolveReport policy_iteration(const GridProblem& pb, const ControlNet& net,
                                           const SolverOptions& opt = {});

/// Regularized sweep g_n = g + 1/(2n) over the given n values (ascending),
/// warm-starting each rung from the previous one. Checks the flat part of
/// the second-difference profile over the top half of the ladder.
[[nodiscard]] LadderReport degeneracy_ladder(const GridProblem& pb, const ControlNet& net,
                                             const std::vector<int>& n_list,
                                             const SolverOptions& opt = {});

/// Discrete-Hessian admissibility over interior nodes with a full cross
/// stencil in the closed domain; tolerance 1e-6 * max(1, |H|_inf) per node.
[[nodiscard]] AuditReport admissibility_audit(const GridProblem& pb, const std::vector<double>& u);

/// Full monitor block for a solution vector over all box nodes; the same
/// computation policy_iteration runs on its result.
[[nodiscard]] Monitors solution_monitors(const GridProblem& pb, const std::vector<double>& u);

} // namespace hb
