#pragma once

#include "ibsim/analytics.hpp"
#include "ibsim/config.hpp"
#include "ibsim/engine.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ibsim {

/// `serial` is the reference path; `parallel` distributes realizations over
/// OpenMP threads. Both fold results in realization order and produce
/// identical output.
enum class Execution { serial, parallel };

struct SweepResult {
    std::vector<SweepPoint> points;  // ascending sigma
    std::vector<std::string> failures;
    double wall_seconds = 0.0;
};

/// One outcome per (sigma, realization). Realization r draws from
/// RngStream(template.seed, r) at every sigma.
SweepResult run_sweep(const SystemState& initial, std::span<const double> sigmas,
                      const SimConfig& config_template, Execution execution = Execution::parallel);

/// "start:stop:step" or a comma-separated list. Values are returned sorted.
std::vector<double> parse_sigma_grid(std::string_view text);
std::vector<double> default_sigma_grid();

struct CurveSpec {
    std::string group;
    std::string label;
    SimConfig config;
};

/// Simulated curves of the three ablation figures, before de-duplication.
std::vector<CurveSpec> figure_curves(const SimConfig& base);

struct FigureSuiteOutput {
    std::vector<std::filesystem::path> files;  // includes the manifest
    std::vector<SweepResult> sweeps;           // one per distinct curve_id
};

/// Writes one sweep CSV per distinct curve (named <curve_id>.csv), the two
/// closed-form baselines, and manifest.csv mapping figure/curve to file.
FigureSuiteOutput run_figure_suite(const SystemState& initial, std::span<const double> sigmas,
                                   const SimConfig& base, const std::filesystem::path& out_dir,
                                   Execution execution = Execution::parallel);

/// Closed-form curves over a grid: no markets, and bonds sellable at a fixed
/// price.
std::vector<AnalyticRow> analytic_curves(const SystemState& initial,
                                         std::span<const double> sigmas, int days,
                                         AnalyticForm form = AnalyticForm::corrected);

enum class Baseline { no_markets, securities_fixed_price };

struct OracleRow {
    double sigma = 0.0;
    double simulated = 0.0;
    double std_error = 0.0;       // sample standard error of the mean
    double null_std_error = 0.0;  // standard error implied by the closed form
    double analytic = 0.0;
    bool pass = false;
};

/// Absolute slack for floating-point noise when both standard errors vanish.
inline constexpr double kOracleAbsoluteSlack = 1e-12;

/// Simulates the regime a baseline describes (markets off, or bonds only at
/// eta = 0 with interbank off) and compares the Monte Carlo mean with the
/// corrected closed form. Banks are independent in both regimes, so the
/// closed form also fixes the variance of a realization's default fraction,
/// sum_i p_i (1 - p_i) / N^2. Pass iff
/// |mean - analytic| <= 4 * max(sample SE, closed-form SE) + slack; the
/// closed-form SE stands in when every realization lands on the same value.
std::vector<OracleRow> check_oracle(const SystemState& initial, std::span<const double> sigmas,
                                    const SimConfig& config_template, Baseline baseline,
                                    Execution execution = Execution::parallel);

}  // namespace ibsim
