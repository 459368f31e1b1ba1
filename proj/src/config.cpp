#include "hb/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hb/errors.hpp"

namespace hb {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(field, "not a number: '" + v + "'");
    return x;
}

long to_long(const std::string& field, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(field, "not an integer: '" + v + "'");
    return x;
}

std::uint64_t to_seed(const std::string& field, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos)
        throw ConfigError(field, "not a nonnegative integer: '" + v + "'");
    return x;
}

bool to_bool(const std::string& field, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(field, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;

        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("config", "malformed section header at line " + std::to_string(lineno));
            section = trim(s.substr(1, s.size() - 2));
            if (section != "problem" && section != "net" && section != "solver" &&
                section != "ladder" && section != "props" && section != "audit")
                throw ConfigError(section, "unknown section");
            continue;
        }

        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError(key, "key appears before any section header");
        if (key.empty() || val.empty())
            throw ConfigError(section + "." + key, "empty key or value at line " + std::to_string(lineno));
        const std::string field = section + "." + key;

        if (section == "problem") {
            if (key == "domain") {
                if (val == "disc")
                    cfg.problem.domain = DomainKind::Disc;
                else if (val == "square")
                    cfg.problem.domain = DomainKind::Square;
                else
                    throw ConfigError(field, "expected disc or square, got '" + val + "'");
                cfg.has_domain = true;
            } else if (key == "d") {
                cfg.problem.d = static_cast<int>(to_long(field, val));
                cfg.has_d = true;
            } else if (key == "m") {
                cfg.problem.m = static_cast<int>(to_long(field, val));
                cfg.has_m = true;
            } else if (key == "h") {
                cfg.problem.h = to_double(field, val);
                cfg.has_h = true;
            } else if (key == "K") {
                cfg.problem.K = to_double(field, val);
            } else if (key == "g") {
                if (val == "constant")
                    cfg.problem.g_kind = GFieldKind::Constant;
                else if (val == "radial_square")
                    cfg.problem.g_kind = GFieldKind::RadialSquare;
                else if (val == "tabulated")
                    cfg.problem.g_kind = GFieldKind::Tabulated;
                else
                    throw ConfigError(field, "expected constant, radial_square or tabulated");
                cfg.has_g = true;
            } else if (key == "g_value") {
                cfg.problem.g_value = to_double(field, val);
            } else if (key == "g_path") {
                cfg.g_path = val;
            } else {
                throw ConfigError(field, "unknown key");
            }
        } else if (section == "net") {
            if (key == "frames") {
                cfg.net_frames = static_cast<int>(to_long(field, val));
                if (cfg.net_frames < 1) throw ConfigError(field, "frames must be >= 1");
            } else if (key == "profiles") {
                cfg.net_profiles = static_cast<int>(to_long(field, val));
                if (cfg.net_profiles < 1) throw ConfigError(field, "profiles must be >= 1");
            } else if (key == "seed") {
                cfg.net_seed = to_seed(field, val);
            } else {
                throw ConfigError(field, "unknown key");
            }
        } else if (section == "solver") {
            if (key == "tol") {
                cfg.solver_tol = to_double(field, val);
                if (!(cfg.solver_tol > 0.0)) throw ConfigError(field, "tol must be positive");
            } else if (key == "max_iters") {
                cfg.solver_max_iters = static_cast<int>(to_long(field, val));
                if (cfg.solver_max_iters < 1) throw ConfigError(field, "max_iters must be >= 1");
            } else if (key == "value_iteration") {
                cfg.solver_value_iteration = to_bool(field, val);
            } else {
                throw ConfigError(field, "unknown key");
            }
        } else if (section == "ladder") {
            if (key == "n") {
                cfg.ladder_n.clear();
                for (const std::string& part : split(val, ','))
                    cfg.ladder_n.push_back(static_cast<int>(to_long(field, part)));
                if (cfg.ladder_n.empty()) throw ConfigError(field, "empty n list");
                for (size_t i = 0; i < cfg.ladder_n.size(); ++i) {
                    if (cfg.ladder_n[i] < 1) throw ConfigError(field, "n entries must be >= 1");
                    if (i > 0 && cfg.ladder_n[i] <= cfg.ladder_n[i - 1])
                        throw ConfigError(field, "n list must be strictly increasing");
                }
            } else {
                throw ConfigError(field, "unknown key");
            }
        } else if (section == "props") {
            if (key == "pairs") {
                cfg.props_pairs = to_long(field, val);
                if (cfg.props_pairs < 1) throw ConfigError(field, "pairs must be >= 1");
            } else if (key == "seed") {
                cfg.props_seed = to_seed(field, val);
            } else if (key == "dims") {
                cfg.props_dims.clear();
                for (const std::string& part : split(val, ',')) {
                    const auto dm = split(part, ':');
                    if (dm.size() != 2) throw ConfigError(field, "dims entries look like d:m");
                    const int d = static_cast<int>(to_long(field, dm[0]));
                    const int m = static_cast<int>(to_long(field, dm[1]));
                    if (d < 2 || d > 6 || m < 2 || m > d)
                        throw ConfigError(field, "dims entries need 2 <= m <= d <= 6");
                    cfg.props_dims.push_back({d, m});
                }
                if (cfg.props_dims.empty()) throw ConfigError(field, "empty dims list");
            } else {
                throw ConfigError(field, "unknown key");
            }
        } else { // audit
            if (key == "u") {
                cfg.audit_u = val;
            } else {
                throw ConfigError(field, "unknown key");
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    RunConfig cfg = parse_config_text(ss.str());

    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (p.empty()) return;
        const std::filesystem::path fp(p);
        if (fp.is_relative()) p = (dir / fp).string();
    };
    resolve(cfg.g_path);
    resolve(cfg.audit_u);
    return cfg;
}

} // namespace hb
