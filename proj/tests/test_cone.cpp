#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hb/cone.hpp"
#include "hb/symfun.hpp"
#include "test_util.hpp"

using hb::SymMat;

namespace {
SymMat diag(std::initializer_list<double> v) {
    SymMat w(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) {
        w.set(i, i, x);
        ++i;
    }
    return w;
}
} // namespace

TEST_CASE("cone_root frozen values") {
    CHECK(hb::cone_root(SymMat::identity(3), 2) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(hb::cone_root(diag({1.0, -1.0}), 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hb::cone_root(SymMat(2), 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(hb::cone_root(diag({1.0, 2.0}), 2) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("cone_root is the largest P_m root") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 5);
        const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
        const SymMat w = testutil::random_sym(rng, d, -2.0, 2.0);
        const double t = hb::cone_root(w, m);
        const auto sp = hb::eigenvalues(w);
        std::vector<double> shifted(sp.values.begin(), sp.values.begin() + d);
        for (double& x : shifted) x += t;
        const double scale = std::max(1.0, std::pow(1.0 + sp.max_abs() + std::fabs(t), m));
        CHECK(std::fabs(hb::elem_sym(std::span<const double>(shifted), m)) <= 1e-8 * scale);
        // Strictly above the root the whole chain is positive.
        SymMat up = w;
        for (int i = 0; i < d; ++i) up.set(i, i, up(i, i) + t + 0.05 * scale);
        CHECK(hb::in_cone(up, m).inside);
    }
}

TEST_CASE("membership tests the identity component, not the sign of P_m") {
    CHECK_FALSE(hb::in_cone(diag({-1.0, -1.0}), 2).inside); // P_2 = 1 but P_1 < 0
    CHECK(hb::in_cone(diag({1.0, 1.0}), 2).inside);
    const SymMat w = diag({5.0, 5.0, -1.0});
    CHECK(hb::in_cone(w, 2).inside);       // P_1 = 9, P_2 = 15
    CHECK_FALSE(hb::in_cone(w, 3).inside); // P_3 = -25
}

TEST_CASE("margin is scale invariant and positive exactly inside") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 5);
        const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
        const SymMat v = hb::sample_cone_member(rng, d, m);
        const auto a = hb::in_cone(v, m);
        CHECK(a.inside);
        CHECK(a.margin > 0.0);
        SymMat v2 = v;
        v2 *= 7.5;
        CHECK(hb::in_cone(v2, m).margin == doctest::Approx(a.margin).epsilon(1e-9));
    }
    CHECK(hb::in_cone(diag({1.0, -1.0}), 2).margin < 0.0);
}

TEST_CASE("admissible closure slack") {
    CHECK(hb::admissible(SymMat::identity(2), 2, 0.0));
    CHECK(hb::admissible(SymMat(3), 3, 0.0)); // zero matrix sits on the cone boundary
    CHECK_FALSE(hb::admissible(diag({1.0, -1.0}), 2, 0.1));
    CHECK(hb::admissible(diag({1.0, -1.0}), 2, 1.0)); // shifted spectrum (2, 0) closes the gap
    CHECK_FALSE(hb::admissible(diag({-1.0, -1.0}), 2, 0.0));
}

TEST_CASE("boundary points built from cone_root are admissible") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 5);
        const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
        SymMat w = testutil::random_sym(rng, d, -2.0, 2.0);
        const double t = hb::cone_root(w, m);
        for (int i = 0; i < d; ++i) w.set(i, i, w(i, i) + t);
        CHECK(hb::admissible(w, m, 1e-6));
        SymMat below = w;
        for (int i = 0; i < d; ++i) below.set(i, i, below(i, i) - 0.5);
        CHECK_FALSE(hb::in_cone(below, m).inside);
    }
}

TEST_CASE("submatrix principle holds on members and catches non-members") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 3 + static_cast<int>(rng() % 4);
        const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
        const SymMat v = hb::sample_cone_member(rng, d, m);
        CHECK(hb::submatrix_cone_check(v, m));
    }
    CHECK_FALSE(hb::submatrix_cone_check(diag({5.0, 5.0, -1.0}), 3));
}

TEST_CASE("sample_cone_member covers every dimension pair") {
    std::mt19937_64 rng(35);
    for (int d = 2; d <= hb::kMaxDim; ++d)
        for (int m = 2; m <= d; ++m)
            for (int trial = 0; trial < 40; ++trial) {
                const SymMat v = hb::sample_cone_member(rng, d, m);
                CHECK(v.dim() == d);
                CHECK(hb::in_cone(v, m).inside);
            }
}

TEST_CASE("spectrum_in_cone matches the chain definition") {
    const auto sp = hb::Spectrum::from_values(std::array{1.0, 2.0, 3.0});
    CHECK(hb::spectrum_in_cone(sp, 3));
    const auto mixed = hb::Spectrum::from_values(std::array{5.0, 5.0, -1.0});
    CHECK(hb::spectrum_in_cone(mixed, 2));
    CHECK_FALSE(hb::spectrum_in_cone(mixed, 3));
}
