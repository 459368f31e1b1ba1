#include "hb/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "hb/bellman.hpp"
#include "hb/errors.hpp"
#include "hb/props.hpp"
#include "hb/solver.hpp"

namespace hb {

namespace {

std::string f17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string f10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* report_file(const std::string& command) {
    if (command == "ladder") return "ladder_report.txt";
    if (command == "props") return "props_report.txt";
    if (command == "audit") return "audit_report.txt";
    return "report.txt";
}

std::string domain_name(DomainKind k) { return k == DomainKind::Disc ? "disc" : "square"; }

std::string g_name(GFieldKind k) {
    switch (k) {
        case GFieldKind::Constant: return "constant";
        case GFieldKind::RadialSquare: return "radial_square";
        case GFieldKind::Tabulated: return "tabulated";
    }
    return "?";
}

GridProblem build_from_config(const RunConfig& cfg) {
    if (!cfg.has_domain) throw ConfigError("problem.domain", "missing required key");
    if (!cfg.has_d) throw ConfigError("problem.d", "missing required key");
    if (!cfg.has_m) throw ConfigError("problem.m", "missing required key");
    if (!cfg.has_h) throw ConfigError("problem.h", "missing required key");
    if (!cfg.has_g) throw ConfigError("problem.g", "missing required key");

    ProblemSpec spec = cfg.problem;
    if (spec.g_kind == GFieldKind::Tabulated) {
        if (cfg.g_path.empty())
            throw ConfigError("problem.g_path", "tabulated g needs a file path");
        std::ifstream f(cfg.g_path);
        if (!f) throw ConfigError("problem.g_path", "cannot open " + cfg.g_path);
        double v;
        while (f >> v) spec.g_table.push_back(v);
        if (!f.eof()) throw ConfigError("problem.g_path", "non-numeric data in " + cfg.g_path);
    }
    return build_problem(spec);
}

void write_problem_block(std::ostream& out, const std::string& command, const RunConfig& cfg,
                         const GridProblem& pb, const ControlNet& net) {
    out << "[report]\n";
    out << "command = " << command << "\n";
    out << "domain = " << domain_name(pb.domain) << "\n";
    out << "d = " << pb.d << "\n";
    out << "m = " << pb.m << "\n";
    out << "h = " << f17(pb.h) << "\n";
    out << "K = " << f10(pb.K) << "\n";
    out << "g = " << g_name(cfg.problem.g_kind) << "\n";
    if (cfg.problem.g_kind == GFieldKind::Constant)
        out << "g_value = " << f10(cfg.problem.g_value) << "\n";
    out << "interior_nodes = " << pb.interior.size() << "\n";
    out << "frames = " << net.frames.size() << "\n";
    out << "profiles = " << cfg.net_profiles << "\n";
    out << "seed = " << net.seed << "\n";
    out << "controls = " << net.controls.size() << "\n";
}

void write_monitor_block(std::ostream& out, const Monitors& mo) {
    out << "[monitors]\n";
    out << "barrier_ratio = " << f17(mo.barrier_ratio) << "\n";
    out << "max_gradient = " << f17(mo.max_gradient) << "\n";
    out << "interior_d2_max = " << f17(mo.interior_d2_max) << "\n";
    out << "boundary_d2_max = " << f17(mo.boundary_d2_max) << "\n";
    out << "d2_ratio = " << f17(mo.d2_ratio) << "\n";
    out << "min_boundary_normal = " << f17(mo.min_boundary_normal) << "\n";
    out << "subharmonic_slack = " << f17(mo.subharmonic_slack) << "\n";
    out << "sup_u = " << f17(mo.sup_u) << "\n";
    out << "admissibility_fraction = " << f17(mo.admissibility_fraction) << "\n";
    out << "admissibility_worst = " << f17(mo.admissibility_worst) << "\n";
    out << "assumption_grad_ok = " << (mo.assumption_grad_ok ? "true" : "false") << "\n";
    out << "assumption_worst_slack = " << f17(mo.assumption_worst_slack) << "\n";
    out << "assumption_gpos_ok = " << (mo.assumption_gpos_ok ? "true" : "false") << "\n";
}

void write_u_csv(const std::string& path, const GridProblem& pb, const std::vector<double>& u) {
    std::ofstream out(path);
    if (!out) throw ConfigError("out", "cannot write " + path);
    out << (pb.d == 2 ? "x,y,u" : "x,y,z,u") << "\n";
    const long total = pb.node_count();
    for (long idx = 0; idx < total; ++idx) {
        if (pb.inside[idx] < 0) continue;
        const auto x = pb.point(static_cast<int>(idx));
        for (int a = 0; a < pb.d; ++a) out << f17(x[a]) << ",";
        out << f17(u[idx]) << "\n";
    }
}

void write_failure(const std::string& out_dir, const std::string& command, const std::string& kind,
                   const std::string& field, const std::string& message,
                   const std::vector<double>* history = nullptr) {
    std::ofstream out(out_dir + "/" + report_file(command));
    out << "[failure]\n";
    out << "kind = " << kind << "\n";
    if (!field.empty()) out << "field = " << field << "\n";
    out << "message = " << message << "\n";
    if (history && !history->empty()) {
        out << "[residuals]\n";
        for (size_t i = 0; i < history->size(); ++i)
            out << (i + 1) << " = " << f17((*history)[i]) << "\n";
    }
}

SolverOptions options_from(const RunConfig& cfg) {
    SolverOptions opt;
    opt.tol = cfg.solver_tol;
    opt.max_iters = cfg.solver_max_iters;
    opt.value_iteration = cfg.solver_value_iteration;
    return opt;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const GridProblem pb = build_from_config(cfg);
    const ControlNet net =
        build_control_net(pb.d, pb.m, cfg.net_frames, cfg.net_profiles, cfg.net_seed);
    log << "solve: " << domain_name(pb.domain) << " d=" << pb.d << " m=" << pb.m
        << " h=" << f10(pb.h) << ", " << pb.interior.size() << " interior nodes, "
        << net.controls.size() << " controls\n";

    const SolveReport rep = policy_iteration(pb, net, options_from(cfg));
    write_u_csv(out_dir + "/u.csv", pb, rep.u);

    std::ofstream out(out_dir + "/report.txt");
    write_problem_block(out, "solve", cfg, pb, net);
    out << "converged = " << (rep.converged ? "true" : "false") << "\n";
    out << "iterations = " << rep.iterations << "\n";
    out << "final_residual = " << f17(rep.final_residual) << "\n";
    write_monitor_block(out, rep.monitors);
    out << "[residuals]\n";
    for (size_t i = 0; i < rep.residual_history.size(); ++i)
        out << (i + 1) << " = " << f17(rep.residual_history[i]) << "\n";
    out << "[warnings]\n";
    if (rep.degenerate_g_warning)
        out << "degenerate_g = inf g is zero on the grid; the equation was solved as "
               "given, consider the ladder command\n";
    else
        out << "none\n";

    log << "converged in " << rep.iterations << " iterations, residual "
        << f10(rep.final_residual) << "\n";
    if (rep.degenerate_g_warning) log << "warning: g vanishes somewhere on the grid\n";
    log << "wrote " << out_dir << "/u.csv and " << out_dir << "/report.txt\n";
    return 0;
}

int cmd_ladder(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const GridProblem pb = build_from_config(cfg);
    const ControlNet net =
        build_control_net(pb.d, pb.m, cfg.net_frames, cfg.net_profiles, cfg.net_seed);
    log << "ladder: " << cfg.ladder_n.size() << " rungs over n = {";
    for (size_t i = 0; i < cfg.ladder_n.size(); ++i)
        log << (i ? "," : "") << cfg.ladder_n[i];
    log << "}\n";

    LadderReport rep;
    try {
        rep = degeneracy_ladder(pb, net, cfg.ladder_n, options_from(cfg));
    } catch (const LadderError& e) {
        // keep whatever rungs finished, then report the failure
        for (size_t r = 0; r < e.partial.rungs.size(); ++r)
            write_u_csv(out_dir + "/u_n" + std::to_string(e.partial.n_list[r]) + ".csv", pb,
                        e.partial.rungs[r].u);
        throw;
    }

    for (size_t r = 0; r < rep.rungs.size(); ++r) {
        write_u_csv(out_dir + "/u_n" + std::to_string(rep.n_list[r]) + ".csv", pb, rep.rungs[r].u);
        log << "rung n=" << rep.n_list[r] << ": " << rep.rungs[r].iterations
            << " iterations, residual " << f10(rep.rungs[r].final_residual) << "\n";
    }

    std::ofstream out(out_dir + "/ladder_report.txt");
    write_problem_block(out, "ladder", cfg, pb, net);
    out << "rungs = " << rep.rungs.size() << "\n";
    out << "[rungs]\n";
    for (size_t r = 0; r < rep.rungs.size(); ++r) {
        const std::string tag = "rung_" + std::to_string(r + 1) + "_";
        const SolveReport& sr = rep.rungs[r];
        out << tag << "n = " << rep.n_list[r] << "\n";
        out << tag << "iterations = " << sr.iterations << "\n";
        out << tag << "final_residual = " << f17(sr.final_residual) << "\n";
        out << tag << "interior_d2_max = " << f17(sr.monitors.interior_d2_max) << "\n";
        out << tag << "boundary_d2_max = " << f17(sr.monitors.boundary_d2_max) << "\n";
        out << tag << "min_boundary_normal = " << f17(sr.monitors.min_boundary_normal) << "\n";
        out << tag << "sup_u = " << f17(sr.monitors.sup_u) << "\n";
    }
    out << "[ladder]\n";
    for (size_t i = 0; i + 1 < rep.rungs.size(); ++i)
        out << "pairwise_sup_" << (i + 1) << "_" << (i + 2) << " = " << f17(rep.pairwise_sup[i])
            << "\n";
    out << "d2_variation = " << f17(rep.d2_variation) << "\n";
    out << "c11_surrogate = " << (rep.c11_surrogate_ok ? "true" : "false") << "\n";
    write_monitor_block(out, rep.rungs.back().monitors);

    log << "d2 variation over the top half: " << f10(rep.d2_variation)
        << (rep.c11_surrogate_ok ? " (flat)" : " (NOT flat)") << "\n";
    log << "wrote " << out_dir << "/ladder_report.txt\n";
    if (!rep.c11_surrogate_ok) {
        log << "second-difference profile is not settling; treat the output as suspect\n";
        return 3;
    }
    return 0;
}

int cmd_props(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    std::vector<PropResult> all;
    log << "props: " << cfg.props_pairs << " cases per check, seed " << cfg.props_seed << "\n";
    auto absorb = [&](std::vector<PropResult> batch) {
        for (PropResult& r : batch) {
            log << "  " << (r.pass ? "pass " : "FAIL ") << r.name << " (" << r.cases << " cases, "
                << r.violations << " violations, worst " << f10(r.worst_slack) << ")\n";
            all.push_back(std::move(r));
        }
    };
    absorb(run_algebra_suite(cfg.props_pairs, cfg.props_seed));
    absorb(run_bellman_suite(cfg.props_pairs, cfg.props_seed));
    absorb(run_quasi_suite(cfg.props_pairs, cfg.props_seed,
                           {cfg.props_dims.data(), cfg.props_dims.size()}));

    long violations = 0;
    std::ofstream out(out_dir + "/props_report.txt");
    out << "[report]\n";
    out << "command = props\n";
    out << "pairs = " << cfg.props_pairs << "\n";
    out << "seed = " << cfg.props_seed << "\n";
    out << "checks = " << all.size() << "\n";
    out << "[checks]\n";
    for (const PropResult& r : all) {
        violations += r.violations;
        out << r.name << " = " << (r.pass ? "pass" : "fail") << " cases=" << r.cases
            << " violations=" << r.violations << " worst_slack=" << f17(r.worst_slack)
            << " seconds=" << f10(r.seconds) << "\n";
    }
    out << "[summary]\n";
    out << "violations = " << violations << "\n";
    out << "pass = " << (violations == 0 ? "true" : "false") << "\n";

    log << (violations == 0 ? "all checks passed\n" : "violations found\n");
    log << "wrote " << out_dir << "/props_report.txt\n";
    return violations == 0 ? 0 : 3;
}

std::vector<double> read_u_csv(const std::string& path, const GridProblem& pb) {
    std::ifstream f(path);
    if (!f) throw ConfigError("audit.u", "cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("audit.u", "empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string want = pb.d == 2 ? "x,y,u" : "x,y,z,u";
    if (line != want)
        throw ConfigError("audit.u", "unexpected header '" + line + "', want '" + want + "'");

    std::vector<double> u(pb.node_count(), 0.0);
    long row = 0;
    const long total = pb.node_count();
    long idx = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        while (idx < total && pb.inside[idx] < 0) ++idx;
        if (idx >= total) throw ConfigError("audit.u", "more rows than closed-domain nodes");

        std::array<double, 4> vals{};
        size_t start = 0;
        for (int c = 0; c < pb.d + 1; ++c) {
            const size_t stop = c == pb.d ? line.size() : line.find(',', start);
            if (stop == std::string::npos)
                throw ConfigError("audit.u", "short row " + std::to_string(row + 2));
            const std::string cell = line.substr(start, stop - start);
            char* end = nullptr;
            vals[c] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw ConfigError("audit.u", "bad number in row " + std::to_string(row + 2));
            start = stop + 1;
        }
        const auto x = pb.point(static_cast<int>(idx));
        for (int a = 0; a < pb.d; ++a)
            if (std::fabs(vals[a] - x[a]) > 1e-12)
                throw ConfigError("audit.u", "row " + std::to_string(row + 2) +
                                                 " does not match the grid node order");
        u[idx] = vals[pb.d];
        ++idx;
        ++row;
    }
    while (idx < total && pb.inside[idx] < 0) ++idx;
    if (idx != total)
        throw ConfigError("audit.u", "fewer rows than closed-domain nodes");
    return u;
}

int cmd_audit(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const GridProblem pb = build_from_config(cfg);
    if (cfg.audit_u.empty()) throw ConfigError("audit.u", "missing required key");
    const std::vector<double> u = read_u_csv(cfg.audit_u, pb);

    const AuditReport audit = admissibility_audit(pb, u);
    const Monitors mo = solution_monitors(pb, u);

    std::ofstream out(out_dir + "/audit_report.txt");
    out << "[report]\n";
    out << "command = audit\n";
    out << "domain = " << domain_name(pb.domain) << "\n";
    out << "d = " << pb.d << "\n";
    out << "m = " << pb.m << "\n";
    out << "h = " << f17(pb.h) << "\n";
    out << "source = " << cfg.audit_u << "\n";
    out << "[audit]\n";
    out << "audited = " << audit.audited << "\n";
    out << "passed = " << audit.passed << "\n";
    out << "fraction = " << f17(audit.fraction) << "\n";
    out << "worst_margin = " << f17(audit.worst_margin) << "\n";
    write_monitor_block(out, mo);

    log << "audited " << audit.audited << " nodes, " << audit.passed << " admissible ("
        << f10(100.0 * audit.fraction) << "%)\n";
    log << "wrote " << out_dir << "/audit_report.txt\n";
    return audit.passed == audit.audited ? 0 : 3;
}

} // namespace

int run_command(const std::string& command, RunConfig cfg, const std::string& out_dir_in,
                long seed_override, std::ostream& log) {
    const std::string out_dir = out_dir_in.empty() ? "." : out_dir_in;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (seed_override >= 0) {
        cfg.net_seed = static_cast<std::uint64_t>(seed_override);
        cfg.props_seed = static_cast<std::uint64_t>(seed_override);
    }

    try {
        if (command == "solve") return cmd_solve(cfg, out_dir, log);
        if (command == "ladder") return cmd_ladder(cfg, out_dir, log);
        if (command == "props") return cmd_props(cfg, out_dir, log);
        if (command == "audit") return cmd_audit(cfg, out_dir, log);
        throw ConfigError("command", "unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        log << "config error (" << e.field << "): " << e.what() << "\n";
        write_failure(out_dir, command, "config", e.field, e.what());
        return 1;
    } catch (const LadderError& e) {
        log << "convergence failure: " << e.what() << "\n";
        write_failure(out_dir, command, "convergence", "",
                      e.what(), e.partial.rungs.empty() ? nullptr
                                                        : &e.partial.rungs.back().residual_history);
        return 2;
    } catch (const ConvergenceError& e) {
        log << "convergence failure: " << e.what() << "\n";
        write_failure(out_dir, command, "convergence", "", e.what(), &e.residual_history);
        return 2;
    } catch (const NumericError& e) {
        log << "numeric failure: " << e.what() << "\n";
        write_failure(out_dir, command, "numeric", "", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        write_failure(out_dir, command, "config", "", e.what());
        return 1;
    } catch (const std::domain_error& e) {
        log << "config error: " << e.what() << "\n";
        write_failure(out_dir, command, "config", "", e.what());
        return 1;
    }
}

} // namespace hb
