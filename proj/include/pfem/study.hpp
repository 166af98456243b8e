#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfem/mesh.hpp"
#include "pfem/scheme.hpp"

namespace pfem {

/// Time-step rule: coupled gives tau = c / M^2 (the tables' h = 1/M
/// convention), fixed gives the same tau for every mesh.
struct TauRule {
    enum class Kind { coupled, fixed };
    Kind kind = Kind::coupled;
    double value = 1.0;

    [[nodiscard]] double tau_for(int M) const;
    static TauRule coupled(double c) { return {Kind::coupled, c}; }
    static TauRule fixed(double tau) { return {Kind::fixed, tau}; }
};

struct StudyConfig {
    int example = 1;
    Scheme scheme = Scheme::A;
    int degree = 1;
    std::vector<int> mesh_sizes;
    TauRule tau_rule;
    double final_time = 1.0;
    /// Unset: Ritz projection for degree 1, interpolation otherwise.
    std::optional<InitMode> init;
    double tol = 1e-10;
    SourceTime source_time = SourceTime::next;

    [[nodiscard]] InitMode init_mode() const;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const StudyConfig& config);

/// Number of steps N with N * tau = T, or ConfigError if tau does not divide T.
std::size_t step_count(double final_time, double tau);

struct StudyRow {
    int M = 0;
    double h = 0.0;
    double tau = 0.0;
    std::size_t steps = 0;
    double l2 = 0.0;
    double h1 = 0.0;
    double cg_iters_avg = 0.0;
    double monitor_linf_max = 0.0;
    double monitor_w1inf_max = 0.0;
    double wall_ms = 0.0;
};

struct ConvergenceReport {
    int example = 1;
    Scheme scheme = Scheme::A;
    int degree = 1;
    std::vector<StudyRow> rows;
    /// rate_l2[i] compares rows i and i + 1.
    std::vector<double> rate_l2;
    std::vector<double> rate_h1;
};

Mesh make_domain_mesh(DomainTag domain, int M);

using RowCallback = std::function<void(const StudyRow&)>;

/// Run every mesh size of the study and compute adjacent observed rates.
/// Solver failures are rethrown as SolverError annotated with M and step.
ConvergenceReport run_study(const StudyConfig& config, const RowCallback& on_row = {});

struct PlateauRow {
    double tau = 0.0;
    int M = 0;
    double l2 = 0.0;
    double h1 = 0.0;
    /// l2 / l2 of the next smaller tau; empty for the smallest tau.
    std::optional<double> ratio_l2;
};

/// Finest-mesh errors of fixed-tau studies, ordered by decreasing tau.
std::vector<PlateauRow> plateau_check(std::span<const ConvergenceReport> reports);

enum class ReportFormat { csv, markdown };

void emit_report(const ConvergenceReport& report, ReportFormat format, std::ostream& out);
void emit_report(const ConvergenceReport& report, ReportFormat format, const std::filesystem::path& path);
void emit_plateau(std::span<const PlateauRow> rows, ReportFormat format, std::ostream& out);

/// Parse CSV produced by `emit_report` (rates are re-read, not recomputed).
ConvergenceReport parse_report_csv(std::istream& in);

/// Named study grids "table1" .. "table6".
std::vector<StudyConfig> preset(std::string_view name);

std::string to_string(Scheme scheme);

}  // namespace pfem
