#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hb {

enum class DomainKind { Disc, Square };
enum class GFieldKind { Constant, RadialSquare, Tabulated };

/// Dirichlet problem data on a uniform grid over the bounding box [-1, 1]^d.
/// Boundary data is identically zero. Node linear index runs x-fastest:
/// idx = i + n*(j + n*k).
struct GridProblem {
    int d = 2;
    int m = 2;
    DomainKind domain = DomainKind::Disc;
    double h = 0.0;
    int n = 0;      // nodes per axis, n = 2/h + 1
    double K = 1.0; // regularity budget for the gradient bound

    std::vector<double> g;       // right-hand-side field, all box nodes
    std::vector<int8_t> inside;  // 1: interior (psi > 0); 0: on the boundary; -1: outside
    std::vector<int> interior;   // linear indices of interior nodes

    double g_min = 0.0, g_max = 0.0; // over interior nodes

    // |grad g|^2 <= K g checked by centered differences at interior nodes
    // whose axis neighbors stay in the closed domain; O(h) slack allowed.
    bool assumption_grad_ok = true;
    double assumption_worst_slack = 0.0; // max(0, worst |grad g|^2 - K g)
    bool assumption_gpos_ok = true;      // 1/sup g <= K (g not identically 0)

    [[nodiscard]] double coord(int i) const { return -1.0 + i * h; }
    [[nodiscard]] int index(const std::array<int, 3>& iv) const {
        int idx = iv[d - 1];
        for (int a = d - 2; a >= 0; --a) idx = idx * n + iv[a];
        return idx;
    }
    [[nodiscard]] std::array<int, 3> unindex(int idx) const {
        std::array<int, 3> iv{};
        for (int a = 0; a < d; ++a) {
            iv[a] = idx % n;
            idx /= n;
        }
        return iv;
    }
    [[nodiscard]] std::array<double, 3> point(int idx) const {
        const auto iv = unindex(idx);
        std::array<double, 3> x{};
        for (int a = 0; a < d; ++a) x[a] = coord(iv[a]);
        return x;
    }
    [[nodiscard]] long node_count() const {
        long c = 1;
        for (int a = 0; a < d; ++a) c *= n;
        return c;
    }
    /// Domain level set: positive inside. Disc: (1 - |x|^2)/2; square: the
    /// face distance min_i(1 - |x_i|).
    [[nodiscard]] double psi(const std::array<double, 3>& x) const;
};

struct ProblemSpec {
    DomainKind domain = DomainKind::Disc;
    int d = 2;
    int m = 2;
    double h = 1.0 / 16;
    double K = 1.0;
    GFieldKind g_kind = GFieldKind::Constant;
    double g_value = 1.0;
    std::vector<double> g_table; // Tabulated: values for closed-domain nodes in index order
};

/// Validates the spec (throws ConfigError naming the field) and assembles the
/// grid, the g field, and the regularity-assumption report.
[[nodiscard]] GridProblem build_problem(const ProblemSpec& spec);

} // namespace hb
