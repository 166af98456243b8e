#include "pfem/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pfem/errors.hpp"
#include "pfem/norms.hpp"
#include "pfem/problem.hpp"

namespace pfem {

namespace {

constexpr std::string_view kCsvHeader =
    "example,scheme,degree,M,h,tau,steps,l2_error,h1_error,rate_l2,rate_h1,cg_iters_avg,"
    "monitor_linf_max,monitor_w1inf_max,wall_ms";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("parse_report_csv: bad number '" + s + "'");
    }
    return v;
}

std::string rate_field(const std::vector<double>& rates, std::size_t row) {
    return row == 0 ? std::string{} : fmt::format("{}", rates[row - 1]);
}

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::A ? "A" : "B"; }

double TauRule::tau_for(int M) const {
    return kind == Kind::fixed ? value : value / (static_cast<double>(M) * M);
}

InitMode StudyConfig::init_mode() const {
    if (init) {
        return *init;
    }
    return degree == 1 ? InitMode::ritz : InitMode::interpolation;
}

std::size_t step_count(double final_time, double tau) {
    if (!(tau > 0.0) || !(final_time > 0.0)) {
        throw ConfigError("tau and T must be positive");
    }
    const double ratio = final_time / tau;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * tau - final_time) > 1e-12 * std::max(1.0, final_time)) {
        throw ConfigError(fmt::format("tau = {} does not divide T = {} into an integral number of steps", tau,
                                      final_time));
    }
    return static_cast<std::size_t>(n);
}

void validate(const StudyConfig& config) {
    if (config.example < 1 || config.example > 3) {
        throw ConfigError(fmt::format("example must be 1, 2 or 3 (got {})", config.example));
    }
    if (config.degree != 1 && config.degree != 2) {
        throw ConfigError(fmt::format("degree must be 1 or 2 (got {})", config.degree));
    }
    if (config.example == 2 && config.degree != 1) {
        throw ConfigError("example 2 runs on a polygonal disk and supports degree 1 only");
    }
    if (config.mesh_sizes.empty()) {
        throw ConfigError("mesh size list is empty");
    }
    for (std::size_t i = 0; i < config.mesh_sizes.size(); ++i) {
        const int M = config.mesh_sizes[i];
        if (M < 1) {
            throw ConfigError(fmt::format("mesh size M = {} must be positive", M));
        }
        if (i > 0 && M <= config.mesh_sizes[i - 1]) {
            throw ConfigError("mesh sizes must be strictly increasing");
        }
        if (config.example == 2 && M % 8 != 0) {
            throw ConfigError(fmt::format("disk meshes need M divisible by 8 (got {})", M));
        }
    }
    if (!(config.tol > 0.0)) {
        throw ConfigError("solver tolerance must be positive");
    }
    if (!(config.tau_rule.value > 0.0)) {
        throw ConfigError("tau rule value must be positive");
    }
    for (int M : config.mesh_sizes) {
        step_count(config.final_time, config.tau_rule.tau_for(M));
    }
}

Mesh make_domain_mesh(DomainTag domain, int M) {
    switch (domain) {
        case DomainTag::square: return unit_square_mesh(M);
        case DomainTag::disk: return unit_disk_mesh(M);
        case DomainTag::cube: return unit_cube_mesh(M);
    }
    throw std::invalid_argument("make_domain_mesh: unknown domain");
}

ConvergenceReport run_study(const StudyConfig& config, const RowCallback& on_row) {
    validate(config);
    ProblemSpec spec = builtin_example(config.example);
    spec.final_time = config.final_time;

    ConvergenceReport report;
    report.example = config.example;
    report.scheme = config.scheme;
    report.degree = config.degree;

    SchemeOptions options;
    options.source_time = config.source_time;
    CgOptions cg;
    cg.tol = config.tol;

    for (int M : config.mesh_sizes) {
        const auto start = std::chrono::steady_clock::now();
        const Mesh mesh = make_domain_mesh(spec.domain, M);
        const Discretization disc(spec, mesh, config.degree, options);
        const double tau = config.tau_rule.tau_for(M);
        const std::size_t steps = step_count(config.final_time, tau);

        StudyRow row;
        row.M = M;
        row.h = mesh.h;
        row.tau = tau;
        row.steps = steps;
        std::size_t iterations = 0;
        DiscreteState state;
        try {
            state = disc.initialize(config.init_mode(), tau, cg);
            row.monitor_linf_max = state.monitor_linf;
            row.monitor_w1inf_max = state.monitor_w1inf;
            for (std::size_t n = 0; n < steps; ++n) {
                state = disc.advance(config.scheme, state, cg);
                iterations += state.cg_iterations;
                row.monitor_linf_max = std::max(row.monitor_linf_max, state.monitor_linf);
                row.monitor_w1inf_max = std::max(row.monitor_w1inf_max, state.monitor_w1inf);
            }
        } catch (const EllipticityError& e) {
            throw EllipticityError(fmt::format("M = {}: {}", M, e.what()), e.step(), e.where());
        } catch (const SolverError& e) {
            throw SolverError(fmt::format("M = {}: {}", M, e.what()), e.step());
        }
        const ErrorPair err = error_norms(spec, disc.space(), state.values, state.time);
        row.l2 = err.l2;
        row.h1 = err.h1;
        row.cg_iters_avg = static_cast<double>(iterations) / static_cast<double>(steps * spec.components);
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        report.rows.push_back(row);
        if (on_row) {
            on_row(row);
        }
    }

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        const bool ok = a.l2 > 0.0 && b.l2 > 0.0 && a.h1 > 0.0 && b.h1 > 0.0;
        report.rate_l2.push_back(ok ? observed_rate(a.h, a.l2, b.h, b.l2) : nan);
        report.rate_h1.push_back(ok ? observed_rate(a.h, a.h1, b.h, b.h1) : nan);
    }
    return report;
}

std::vector<PlateauRow> plateau_check(std::span<const ConvergenceReport> reports) {
    if (reports.size() < 2) {
        throw ConfigError("plateau_check needs at least two fixed-tau reports");
    }
    std::vector<int> sizes;
    for (const auto& r : reports[0].rows) {
        sizes.push_back(r.M);
    }
    std::vector<PlateauRow> rows;
    for (const auto& report : reports) {
        if (report.rows.empty()) {
            throw ConfigError("plateau_check: empty report");
        }
        std::vector<int> these;
        for (const auto& r : report.rows) {
            these.push_back(r.M);
            if (r.tau != report.rows.front().tau) {
                throw ConfigError("plateau_check: report does not use a fixed tau");
            }
        }
        if (these != sizes) {
            throw ConfigError("plateau_check: reports use different mesh lists");
        }
        const auto& finest = report.rows.back();
        rows.push_back({finest.tau, finest.M, finest.l2, finest.h1, std::nullopt});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const PlateauRow& a, const PlateauRow& b) { return a.tau > b.tau; });
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        rows[i].ratio_l2 = rows[i].l2 / rows[i + 1].l2;
    }
    return rows;
}

void emit_report(const ConvergenceReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        fmt::print(out, "{}\n", kCsvHeader);
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f}\n", report.example,
                       to_string(report.scheme), report.degree, r.M, r.h, r.tau, r.steps, r.l2, r.h1,
                       rate_field(report.rate_l2, i), rate_field(report.rate_h1, i), r.cg_iters_avg,
                       r.monitor_linf_max, r.monitor_w1inf_max, r.wall_ms);
        }
    } else {
        fmt::print(out, "Example {}, scheme {}, degree {}\n\n", report.example, to_string(report.scheme),
                   report.degree);
        fmt::print(out, "| tau | M | h | L2 error | H1 error |\n|---|---|---|---|---|\n");
        for (const auto& r : report.rows) {
            fmt::print(out, "| {:.6g} | {} | {:.4g} | {:.3E} | {:.3E} |\n", r.tau, r.M, r.h, r.l2, r.h1);
        }
        if (!report.rate_l2.empty()) {
            fmt::print(out, "| convergence rate | | | {:.2f} | {:.2f} |\n", report.rate_l2.back(),
                       report.rate_h1.back());
        }
    }
    if (!out) {
        throw std::runtime_error("emit_report: write failed");
    }
}

void emit_report(const ConvergenceReport& report, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_report: cannot open '" + path.string() + "' for writing");
    }
    try {
        emit_report(report, format, out);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("emit_report: write to '" + path.string() + "' failed");
    }
}

void emit_plateau(std::span<const PlateauRow> rows, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv) {
        fmt::print(out, "tau,M,l2_error,h1_error,ratio_l2\n");
        for (const auto& r : rows) {
            fmt::print(out, "{},{},{},{},{}\n", r.tau, r.M, r.l2, r.h1,
                       r.ratio_l2 ? fmt::format("{}", *r.ratio_l2) : std::string{});
        }
        return;
    }
    fmt::print(out, "| tau | M | L2 error | H1 error | L2 ratio vs next tau |\n|---|---|---|---|---|\n");
    for (const auto& r : rows) {
        fmt::print(out, "| {:.6g} | {} | {:.3E} | {:.3E} | {} |\n", r.tau, r.M, r.l2, r.h1,
                   r.ratio_l2 ? fmt::format("{:.3f}", *r.ratio_l2) : std::string{});
    }
}

ConvergenceReport parse_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("parse_report_csv: missing or unexpected header");
    }
    ConvergenceReport report;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 15) {
            throw std::invalid_argument("parse_report_csv: expected 15 fields, got " + std::to_string(f.size()));
        }
        report.example = std::stoi(f[0]);
        report.scheme = f[1] == "B" ? Scheme::B : Scheme::A;
        report.degree = std::stoi(f[2]);
        StudyRow r;
        r.M = std::stoi(f[3]);
        r.h = parse_double(f[4]);
        r.tau = parse_double(f[5]);
        r.steps = static_cast<std::size_t>(std::stoull(f[6]));
        r.l2 = parse_double(f[7]);
        r.h1 = parse_double(f[8]);
        if (!report.rows.empty()) {
            report.rate_l2.push_back(parse_double(f[9]));
            report.rate_h1.push_back(parse_double(f[10]));
        }
        r.cg_iters_avg = parse_double(f[11]);
        r.monitor_linf_max = parse_double(f[12]);
        r.monitor_w1inf_max = parse_double(f[13]);
        r.wall_ms = parse_double(f[14]);
        report.rows.push_back(r);
    }
    return report;
}

std::vector<StudyConfig> preset(std::string_view name) {
    auto base = [](int example, std::vector<int> sizes, TauRule rule) {
        StudyConfig c;
        c.example = example;
        c.mesh_sizes = std::move(sizes);
        c.tau_rule = rule;
        return c;
    };
    if (name == "table1") return {base(1, {8, 16, 32}, TauRule::coupled(1.0))};
    if (name == "table2") {
        return {base(1, {16, 32, 64}, TauRule::fixed(0.01)), base(1, {16, 32, 64}, TauRule::fixed(0.025)),
                base(1, {16, 32, 64}, TauRule::fixed(0.05))};
    }
    if (name == "table3") return {base(2, {16, 32, 64}, TauRule::coupled(1.0))};
    if (name == "table4") {
        return {base(2, {32, 64, 128}, TauRule::fixed(0.005)), base(2, {32, 64, 128}, TauRule::fixed(0.010)),
                base(2, {32, 64, 128}, TauRule::fixed(0.025))};
    }
    if (name == "table5") return {base(3, {8, 16, 32}, TauRule::coupled(8.0))};
    if (name == "table6") {
        return {base(3, {8, 16, 32}, TauRule::fixed(0.025)), base(3, {8, 16, 32}, TauRule::fixed(0.05)),
                base(3, {8, 16, 32}, TauRule::fixed(0.1))};
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected table1 .. table6)");
}

}  // namespace pfem
