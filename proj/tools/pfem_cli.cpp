// Command-line driver: single studies, table presets, and report output.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pfem/errors.hpp"
#include "pfem/problem.hpp"
#include "pfem/study.hpp"

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitConfig = 3;

struct Options {
    std::string preset;
    int example = 1;
    std::string scheme = "A";
    int degree = 1;
    std::vector<int> sizes{8, 16, 32};
    double tau = 0.0;
    std::string tau_rule;
    double final_time = 1.0;
    std::string init;
    double tol = 1e-10;
    std::string format = "csv";
    std::string out;
    std::string g_time = "n+1";
    std::string export_mesh;
    bool quiet = false;
};

pfem::TauRule parse_tau(const Options& opt) {
    if (opt.tau > 0.0 && !opt.tau_rule.empty()) {
        throw pfem::ConfigError("--tau and --tau-rule are mutually exclusive");
    }
    if (opt.tau > 0.0) {
        return pfem::TauRule::fixed(opt.tau);
    }
    if (opt.tau_rule.empty()) {
        return pfem::TauRule::coupled(1.0);
    }
    if (opt.tau_rule.rfind("h2:", 0) != 0) {
        throw pfem::ConfigError("--tau-rule must look like h2:<c>, got '" + opt.tau_rule + "'");
    }
    try {
        return pfem::TauRule::coupled(std::stod(opt.tau_rule.substr(3)));
    } catch (const std::logic_error&) {
        throw pfem::ConfigError("--tau-rule: bad constant in '" + opt.tau_rule + "'");
    }
}

std::vector<pfem::StudyConfig> build_configs(const Options& opt) {
    std::vector<pfem::StudyConfig> configs;
    if (!opt.preset.empty()) {
        configs = pfem::preset(opt.preset);
    } else {
        pfem::StudyConfig c;
        c.example = opt.example;
        c.degree = opt.degree;
        c.mesh_sizes = opt.sizes;
        c.tau_rule = parse_tau(opt);
        c.final_time = opt.final_time;
        configs.push_back(c);
    }
    for (auto& c : configs) {
        c.scheme = opt.scheme == "B" ? pfem::Scheme::B : pfem::Scheme::A;
        c.tol = opt.tol;
        c.source_time = opt.g_time == "n" ? pfem::SourceTime::current : pfem::SourceTime::next;
        if (opt.init == "interp") {
            c.init = pfem::InitMode::interpolation;
        } else if (opt.init == "ritz") {
            c.init = pfem::InitMode::ritz;
        }
        pfem::validate(c);
    }
    return configs;
}

int run(const Options& opt) {
    const auto configs = build_configs(opt);
    const auto format = opt.format == "md" ? pfem::ReportFormat::markdown : pfem::ReportFormat::csv;

    if (!opt.export_mesh.empty()) {
        const auto spec = pfem::builtin_example(configs.front().example);
        const auto mesh = pfem::make_domain_mesh(spec.domain, configs.front().mesh_sizes.back());
        std::ofstream mesh_out(opt.export_mesh);
        if (!mesh_out) {
            throw std::runtime_error("cannot open '" + opt.export_mesh + "' for writing");
        }
        pfem::write_mesh(mesh_out, mesh);
    }

    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) {
            throw std::runtime_error("cannot open '" + opt.out + "' for writing");
        }
    }
    std::ostream& out = opt.out.empty() ? std::cout : file;

    std::vector<pfem::ConvergenceReport> reports;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto& c = configs[k];
        auto progress = [&](const pfem::StudyRow& row) {
            if (!opt.quiet) {
                std::cerr << fmt::format("example {} M={} tau={:.6g} steps={} L2={:.3e} H1={:.3e} ({:.0f} ms)\n",
                                         c.example, row.M, row.tau, row.steps, row.l2, row.h1, row.wall_ms);
            }
        };
        reports.push_back(pfem::run_study(c, progress));
        if (k > 0) {
            out << '\n';
        }
        pfem::emit_report(reports.back(), format, out);
    }

    const bool fixed_tau = configs.size() > 1 && std::all_of(configs.begin(), configs.end(), [](const auto& c) {
        return c.tau_rule.kind == pfem::TauRule::Kind::fixed;
    });
    if (fixed_tau) {
        out << '\n';
        pfem::emit_plateau(pfem::plateau_check(reports), format, out);
    }
    if (!out) {
        throw std::runtime_error("write to '" + (opt.out.empty() ? std::string("stdout") : opt.out) + "' failed");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized backward Euler Galerkin solver for nonlinear parabolic equations"};
    Options opt;
    app.add_option("--preset", opt.preset, "Named study grid")
        ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "table5", "table6"}));
    app.add_option("--example", opt.example, "Built-in problem")->check(CLI::IsMember({1, 2, 3}));
    app.add_option("--scheme", opt.scheme, "A: lagged source, B: linearized source")
        ->check(CLI::IsMember({"A", "B"}));
    app.add_option("--degree", opt.degree, "Lagrange degree")->check(CLI::IsMember({1, 2}));
    app.add_option("--M", opt.sizes, "Mesh sizes (cells per side, or boundary points for the disk)")
        ->delimiter(',');
    app.add_option("--tau", opt.tau, "Fixed time step");
    app.add_option("--tau-rule", opt.tau_rule, "Coupled time step tau = c / M^2, written h2:<c>");
    app.add_option("--T", opt.final_time, "Final time");
    app.add_option("--init", opt.init, "Initial projection (default: ritz for degree 1)")
        ->check(CLI::IsMember({"interp", "ritz"}));
    app.add_option("--tol", opt.tol, "Relative CG tolerance");
    app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"csv", "md"}));
    app.add_option("--out", opt.out, "Write the report here instead of stdout");
    app.add_option("--g-time", opt.g_time, "Time level of the explicit source")
        ->check(CLI::IsMember({"n", "n+1"}));
    app.add_option("--export-mesh", opt.export_mesh, "Write the finest mesh in plain-text form");
    app.add_flag("--quiet", opt.quiet, "No progress lines on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        return run(opt);
    } catch (const pfem::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const pfem::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
