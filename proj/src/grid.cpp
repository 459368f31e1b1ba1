#include "hb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hb/errors.hpp"

namespace hb {

double GridProblem::psi(const std::array<double, 3>& x) const {
    if (domain == DomainKind::Disc) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
        return 0.5 * (1.0 - r2);
    }
    double dist = 1.0;
    for (int a = 0; a < d; ++a) dist = std::min(dist, 1.0 - std::fabs(x[a]));
    return dist;
}

GridProblem build_problem(const ProblemSpec& spec) {
    if (spec.d < 2 || spec.d > 3) throw ConfigError("problem.d", "d must be 2 or 3");
    if (spec.m < 2 || spec.m > spec.d) throw ConfigError("problem.m", "m must satisfy 2 <= m <= d");
    if (!(spec.h > 0.0) || spec.h > 1.0) throw ConfigError("problem.h", "h must lie in (0, 1]");
    const double steps = 2.0 / spec.h;
    if (std::fabs(steps - std::round(steps)) > 1e-9 * steps)
        throw ConfigError("problem.h", "2/h must be an integer");
    if (!(spec.K >= 0.0)) throw ConfigError("problem.K", "K must be nonnegative");

    GridProblem pb;
    pb.d = spec.d;
    pb.m = spec.m;
    pb.domain = spec.domain;
    pb.h = spec.h;
    pb.n = static_cast<int>(std::round(steps)) + 1;
    pb.K = spec.K;

    const long total = pb.node_count();
    pb.g.assign(total, 0.0);
    pb.inside.assign(total, -1);

    long closure = 0;
    for (long idx = 0; idx < total; ++idx) {
        const auto x = pb.point(static_cast<int>(idx));
        const double p = pb.psi(x);
        pb.inside[idx] = p > 0.0 ? 1 : (p == 0.0 ? 0 : -1);
        if (pb.inside[idx] >= 0) ++closure;
        if (pb.inside[idx] == 1) pb.interior.push_back(static_cast<int>(idx));
    }
    if (pb.interior.empty()) throw ConfigError("problem.h", "grid has no interior nodes");

    switch (spec.g_kind) {
        case GFieldKind::Constant:
            if (spec.g_value < 0.0) throw ConfigError("problem.g_value", "g must be nonnegative");
            for (long idx = 0; idx < total; ++idx) pb.g[idx] = spec.g_value;
            break;
        case GFieldKind::RadialSquare:
            for (long idx = 0; idx < total; ++idx) {
                const auto x = pb.point(static_cast<int>(idx));
                double r2 = 0.0;
                for (int a = 0; a < pb.d; ++a) r2 += x[a] * x[a];
                pb.g[idx] = r2;
            }
            break;
        case GFieldKind::Tabulated: {
            if (static_cast<long>(spec.g_table.size()) != closure)
                throw ConfigError("problem.g_path",
                                  "tabulated g must hold one value per closed-domain node");
            long row = 0;
            for (long idx = 0; idx < total; ++idx)
                if (pb.inside[idx] >= 0) {
                    const double v = spec.g_table[row++];
                    if (!(v >= 0.0) || !std::isfinite(v))
                        throw ConfigError("problem.g_path", "tabulated g must be finite and nonnegative");
                    pb.g[idx] = v;
                }
            break;
        }
    }

    pb.g_min = std::numeric_limits<double>::infinity();
    pb.g_max = 0.0;
    for (int idx : pb.interior) {
        pb.g_min = std::min(pb.g_min, pb.g[idx]);
        pb.g_max = std::max(pb.g_max, pb.g[idx]);
    }

    // Gradient bound |grad g|^2 <= K g, centered differences, restricted to
    // nodes whose axis neighbors stay inside the closed domain.
    double worst = 0.0;
    for (int idx : pb.interior) {
        const auto iv = pb.unindex(idx);
        double grad2 = 0.0;
        bool usable = true;
        for (int a = 0; a < pb.d && usable; ++a) {
            auto up = iv, dn = iv;
            ++up[a];
            --dn[a];
            if (up[a] >= pb.n || dn[a] < 0) {
                usable = false;
                break;
            }
            const int ui = pb.index(up), di = pb.index(dn);
            if (pb.inside[ui] < 0 || pb.inside[di] < 0) {
                usable = false;
                break;
            }
            const double dg = (pb.g[ui] - pb.g[di]) / (2.0 * pb.h);
            grad2 += dg * dg;
        }
        if (usable) worst = std::max(worst, grad2 - pb.K * pb.g[idx]);
    }
    pb.assumption_worst_slack = std::max(0.0, worst);
    pb.assumption_grad_ok = worst <= 10.0 * pb.h * (1.0 + pb.g_max);
    pb.assumption_gpos_ok = pb.g_max > 0.0 && 1.0 / pb.g_max <= pb.K;
    return pb;
}

} // namespace hb
