#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nncalc/config.hpp"
#include "nncalc/csv.hpp"
#include "nncalc/noether.hpp"
#include "nncalc/variational.hpp"

namespace {

struct Options {
    std::string problem;
    std::string out_dir = ".";
    int grid = 0;
    double tol = 0.0;
    double fd_step = 0.0;
    double s_step = 0.0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--problem", o.problem, "catalog name or config file path")->required();
    cmd->add_option("--grid", o.grid, "grid nodes (log-uniform in t)");
    cmd->add_option("--tol", o.tol, "solver residual tolerance (log space)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--fd-step", o.fd_step, "finite-difference step in conjugated coordinates");
    cmd->add_option("--s-step", o.s_step, "parameter step for s-derivatives at s = 1");
}

nncalc::ProblemConfig resolve_config(const CLI::App* cmd, const Options& o) {
    nncalc::ProblemConfig cfg;
    if (const nncalc::ProblemConfig* built = nncalc::find_builtin(o.problem)) {
        cfg = *built;
    } else if (std::filesystem::exists(o.problem)) {
        cfg = nncalc::load_problem_config(o.problem);
    } else {
        throw nncalc::ConfigError("'" + o.problem +
                                  "' is neither a catalog problem nor a config file "
                                  "(catalog: power, autonomous-energy, x-free-momentum, coupled)");
    }
    if (cmd->count("--grid"))
        cfg.numeric.grid_n = o.grid;
    if (cmd->count("--tol"))
        cfg.numeric.tol = o.tol;
    if (cmd->count("--fd-step"))
        cfg.numeric.fd_step = o.fd_step;
    if (cmd->count("--s-step"))
        cfg.numeric.s_step = o.s_step;
    cfg.validate();
    return cfg;
}

std::string sanitize_label(const std::string& label) {
    std::string out = label;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            c = '_';
    return out;
}

int run_solve(const nncalc::ProblemConfig& cfg, const nncalc::VariationalProblem& problem,
              const std::string& out_dir) {
    const auto& num = cfg.numeric;
    nncalc::SolveOptions opts{num.tol, num.max_iter, num.fd_step};
    nncalc::SolveStats stats;

    std::optional<nncalc::Trajectory> traj;
    try {
        traj.emplace(nncalc::solve_extremal(problem, num.grid_n, opts, &stats));
    } catch (const nncalc::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (last residual " << e.last_residual << ")\n";
        return 3;
    }

    auto el = nncalc::el_residual(problem, *traj, num.fd_step);
    auto dbr = nncalc::dbr_residual(problem, *traj, num.fd_step);
    double el_sup = 0.0, dbr_sup = 0.0;
    for (double r : el)
        el_sup = std::max(el_sup, std::fabs(r));
    for (double r : dbr)
        dbr_sup = std::max(dbr_sup, std::fabs(r));

    std::string path = (std::filesystem::path(out_dir) / "extremal.csv").string();
    nncalc::write_extremal_csv(path, *traj, el, dbr);

    std::printf("problem '%s': grid %d, tol %g\n", cfg.name.c_str(), num.grid_n, num.tol);
    std::printf("converged in %d iterations\n", stats.iterations);
    std::printf("el residual sup (log space):  %.3e\n", el_sup);
    std::printf("dbr residual sup (log space): %.3e\n", dbr_sup);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int run_noether(const nncalc::ProblemConfig& cfg, const nncalc::VariationalProblem& problem,
                const std::vector<nncalc::TransformationFamily>& families,
                const std::string& out_dir) {
    const auto& num = cfg.numeric;
    std::optional<nncalc::Trajectory> traj;

    auto probes = nncalc::default_probes(problem);
    std::printf("problem '%s': %zu families, invariance tolerance %g\n", cfg.name.c_str(),
                families.size(), num.invariance_tol);
    std::printf("%-16s %-12s %-13s %s\n", "family", "defect", "max_log_dev", "verdict");

    for (const auto& fam : families) {
        if (nncalc::identity_defect(fam) > nncalc::kIdentityTol) {
            std::printf("%-16s %-12s %-13s %s\n", fam.label.c_str(), "-", "-",
                        "rejected: not the identity at s = 1");
            continue;
        }
        double defect;
        try {
            defect = nncalc::invariance_defect(problem, fam, probes, num.s_step, num.fd_step);
        } catch (const nncalc::DegenerateError&) {
            std::printf("%-16s %-12s %-13s %s\n", fam.label.c_str(), "-", "-",
                        "degenerate: dT/dt hits the oplus-zero on a probe");
            continue;
        }
        if (defect > num.invariance_tol) {
            std::printf("%-16s %-12.3e %-13s %s\n", fam.label.c_str(), defect, "-",
                        "not invariant");
            continue;
        }
        if (!traj) {
            nncalc::SolveOptions opts{num.tol, num.max_iter, num.fd_step};
            try {
                traj.emplace(nncalc::solve_extremal(problem, num.grid_n, opts));
            } catch (const nncalc::ConvergenceError& e) {
                std::cerr << "error: " << e.what() << " (last residual " << e.last_residual
                          << ")\n";
                return 3;
            }
        }
        auto report = nncalc::noether_quantity(problem, *traj, fam, num.s_step, num.fd_step);
        std::string path =
            (std::filesystem::path(out_dir) / ("noether_" + sanitize_label(fam.label) + ".csv"))
                .string();
        nncalc::write_noether_csv(path, *traj, report);
        std::printf("%-16s %-12.3e %-13.3e %s  (%s)\n", fam.label.c_str(), defect,
                    report.max_log_deviation, report.conserved ? "conserved" : "not conserved",
                    path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplicative (bigeometric) variational calculus toolkit"};
    app.require_subcommand(1);

    Options opts;
    CLI::App* solve = app.add_subcommand("solve", "solve the extremal boundary-value problem");
    CLI::App* noether =
        app.add_subcommand("noether", "check invariance and conserved quantities per family");
    add_common(solve, opts);
    add_common(noether, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* cmd = solve->parsed() ? solve : noether;

    std::optional<nncalc::ProblemConfig> cfg;
    std::optional<nncalc::VariationalProblem> problem;
    std::vector<nncalc::TransformationFamily> families;
    try {
        cfg = resolve_config(cmd, opts);
        problem.emplace(nncalc::make_problem(*cfg));
        if (noether->parsed()) {
            if (cfg->families.empty())
                throw nncalc::ConfigError("noether needs at least one family in the config");
            for (const auto& f : cfg->families)
                families.push_back(nncalc::make_family(f));
            std::sort(families.begin(), families.end(),
                      [](const auto& a, const auto& b) { return a.label < b.label; });
        }
        std::filesystem::create_directories(opts.out_dir);
    } catch (const nncalc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return solve->parsed() ? run_solve(*cfg, *problem, opts.out_dir)
                               : run_noether(*cfg, *problem, families, opts.out_dir);
    } catch (const nncalc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
