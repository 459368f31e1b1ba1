#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hb/config.hpp"
#include "hb/errors.hpp"

namespace {
void check_field(const std::string& text, const std::string& field) {
    try {
        (void)hb::parse_config_text(text);
        FAIL("expected ConfigError for " << field << " in:\n" << text);
    } catch (const hb::ConfigError& e) {
        CHECK(e.field == field);
    }
}

const char* kMinimal =
    "[problem]\n"
    "domain = disc\n"
    "d = 2\n"
    "m = 2\n"
    "h = 0.25\n"
    "g = constant\n"
    "g_value = 1.0\n";
} // namespace

TEST_CASE("defaults survive a minimal file") {
    const auto cfg = hb::parse_config_text(kMinimal);
    CHECK(cfg.has_domain);
    CHECK(cfg.has_d);
    CHECK(cfg.has_m);
    CHECK(cfg.has_h);
    CHECK(cfg.has_g);
    CHECK(cfg.problem.domain == hb::DomainKind::Disc);
    CHECK(cfg.problem.d == 2);
    CHECK(cfg.problem.h == 0.25);
    CHECK(cfg.problem.K == 1.0);
    CHECK(cfg.net_frames == 4);
    CHECK(cfg.net_profiles == 8);
    CHECK(cfg.net_seed == 1);
    CHECK(cfg.solver_tol == 1e-9);
    CHECK(cfg.solver_max_iters == 100);
    CHECK_FALSE(cfg.solver_value_iteration);
    CHECK(cfg.ladder_n == std::vector<int>{8, 32, 128});
    CHECK(cfg.props_pairs == 10000);
    CHECK(cfg.props_seed == 1);
    REQUIRE(cfg.props_dims.size() == 4);
    CHECK(cfg.props_dims[0] == std::array<int, 2>{2, 2});
    CHECK(cfg.props_dims[3] == std::array<int, 2>{4, 3});
    CHECK(cfg.audit_u.empty());
}

TEST_CASE("an empty file parses with nothing set") {
    const auto cfg = hb::parse_config_text("");
    CHECK_FALSE(cfg.has_domain);
    CHECK_FALSE(cfg.has_h);
    CHECK(cfg.net_frames == 4);
}

TEST_CASE("every section and key round-trips") {
    const auto cfg = hb::parse_config_text(
        "# full configuration\n"
        "[problem]\n"
        "domain = square\n"
        "d = 3\n"
        "m = 3\n"
        "h = 0.125\n"
        "K = 4.0\n"
        "g = radial_square\n"
        "\n"
        "[net]\n"
        "frames = 6\n"
        "profiles = 12\n"
        "seed = 99\n"
        "[solver]\n"
        "tol = 1e-8\n"
        "max_iters = 40\n"
        "value_iteration = true\n"
        "[ladder]\n"
        "n = 2, 4, 8\n"
        "[props]\n"
        "pairs = 500\n"
        "seed = 3\n"
        "dims = 2:2, 5:4\n"
        "[audit]\n"
        "u = /tmp/u.csv\n");
    CHECK(cfg.problem.domain == hb::DomainKind::Square);
    CHECK(cfg.problem.d == 3);
    CHECK(cfg.problem.m == 3);
    CHECK(cfg.problem.h == 0.125);
    CHECK(cfg.problem.K == 4.0);
    CHECK(cfg.problem.g_kind == hb::GFieldKind::RadialSquare);
    CHECK(cfg.net_frames == 6);
    CHECK(cfg.net_profiles == 12);
    CHECK(cfg.net_seed == 99);
    CHECK(cfg.solver_tol == 1e-8);
    CHECK(cfg.solver_max_iters == 40);
    CHECK(cfg.solver_value_iteration);
    CHECK(cfg.ladder_n == std::vector<int>{2, 4, 8});
    CHECK(cfg.props_pairs == 500);
    CHECK(cfg.props_seed == 3);
    REQUIRE(cfg.props_dims.size() == 2);
    CHECK(cfg.props_dims[1] == std::array<int, 2>{5, 4});
    CHECK(cfg.audit_u == "/tmp/u.csv");
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    const auto cfg = hb::parse_config_text(
        "# leading comment\n"
        "\n"
        "   [net]   \n"
        "  frames   =   9  \n"
        "# trailing comment\n");
    CHECK(cfg.net_frames == 9);
}

TEST_CASE("repeated keys keep the last value") {
    const auto cfg = hb::parse_config_text("[net]\nframes = 2\nframes = 7\n");
    CHECK(cfg.net_frames == 7);
}

TEST_CASE("unknown sections and keys are named in the error") {
    check_field("[bogus]\n", "bogus");
    check_field("[net]\nbogus = 1\n", "net.bogus");
    check_field("[problem]\ncolor = red\n", "problem.color");
    check_field("frames = 2\n", "frames"); // key before any section
    check_field("[net\n", "config");       // malformed header
    check_field("[net]\njust a line\n", "config");
    check_field("[net]\nframes =\n", "net.frames");
    check_field("[net]\n= 4\n", "net.");
}

TEST_CASE("value validation names section.key") {
    check_field("[problem]\ndomain = triangle\n", "problem.domain");
    check_field("[problem]\nd = two\n", "problem.d");
    check_field("[problem]\nh = fast\n", "problem.h");
    check_field("[problem]\ng = mystery\n", "problem.g");
    check_field("[net]\nframes = 0\n", "net.frames");
    check_field("[net]\nprofiles = 0\n", "net.profiles");
    check_field("[net]\nseed = -3\n", "net.seed");
    check_field("[solver]\ntol = 0\n", "solver.tol");
    check_field("[solver]\ntol = -1e-9\n", "solver.tol");
    check_field("[solver]\nmax_iters = 0\n", "solver.max_iters");
    check_field("[solver]\nvalue_iteration = yes\n", "solver.value_iteration");
    check_field("[ladder]\nn = 4, 4\n", "ladder.n");
    check_field("[ladder]\nn = 8, 2\n", "ladder.n");
    check_field("[ladder]\nn = 0, 4\n", "ladder.n");
    check_field("[ladder]\nn =  \n", "ladder.n");
    check_field("[props]\npairs = 0\n", "props.pairs");
    check_field("[props]\ndims = 5\n", "props.dims");
    check_field("[props]\ndims = 5:1\n", "props.dims");
    check_field("[props]\ndims = 7:2\n", "props.dims");
    check_field("[props]\ndims = 2:3\n", "props.dims");
}

TEST_CASE("load_config resolves data paths against the config directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hb_config_test";
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "run.ini");
        f << "[problem]\ng = tabulated\ng_path = g.txt\n[audit]\nu = sub/u.csv\n";
    }
    const auto cfg = hb::load_config((dir / "run.ini").string());
    CHECK(cfg.g_path == (dir / "g.txt").string());
    CHECK(cfg.audit_u == (dir / "sub" / "u.csv").string());
    {
        std::ofstream f(dir / "abs.ini");
        f << "[audit]\nu = /tmp/elsewhere.csv\n";
    }
    CHECK(hb::load_config((dir / "abs.ini").string()).audit_u == "/tmp/elsewhere.csv");
    try {
        (void)hb::load_config((dir / "missing.ini").string());
        FAIL("expected ConfigError");
    } catch (const hb::ConfigError& e) {
        CHECK(e.field == "config");
    }
    fs::remove_all(dir);
}
