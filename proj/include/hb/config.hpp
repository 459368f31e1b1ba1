#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hb/grid.hpp"

namespace hb {

/// Parsed run configuration. Sections and keys:
///   [problem] domain d m h K g g_value g_path
///   [net]     frames profiles seed
///   [solver]  tol max_iters value_iteration
///   [ladder]  n
///   [props]   pairs seed dims
///   [audit]   u
/// problem.domain/d/m/h/g have no defaults; the has_* flags say whether the
/// file supplied them. Commands that need the grid check them on entry.
struct RunConfig {
    ProblemSpec problem;
    bool has_domain = false, has_d = false, has_m = false, has_h = false, has_g = false;
    std::string g_path; // tabulated g source, resolved against the config file

    int net_frames = 4;
    int net_profiles = 8;
    std::uint64_t net_seed = 1;

    double solver_tol = 1e-9;
    int solver_max_iters = 100;
    bool solver_value_iteration = false;

    std::vector<int> ladder_n = {8, 32, 128};

    long props_pairs = 10000;
    std::uint64_t props_seed = 1;
    std::vector<std::array<int, 2>> props_dims = {{2, 2}, {3, 2}, {3, 3}, {4, 3}};

    std::string audit_u; // solution CSV to audit, resolved against the config file
};

/// Strict INI-style parser: '#' comment lines, [section] headers, key = value
/// pairs. Unknown sections or keys raise ConfigError naming "section.key";
/// repeated keys keep the last value.
[[nodiscard]] RunConfig parse_config_text(const std::string& text);

/// Reads and parses the file, then resolves relative g_path / audit.u
/// entries against the config file's directory.
[[nodiscard]] RunConfig load_config(const std::string& path);

} // namespace hb
