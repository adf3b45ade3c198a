#pragma once

#include "ibsim/analytics.hpp"
#include "ibsim/balance.hpp"
#include "ibsim/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ibsim {

// Column layouts. Frozen: downstream tooling reads these by position.
inline constexpr const char* kBanksHeader = "id,name,loans,cash,securities_units,deposits";
inline constexpr const char* kSweepHeader =
    "sigma,config_id,mean_default_fraction,std_error,n_realizations";
inline constexpr const char* kTraceHeader =
    "day,defaults_cum,loan_volume,bond_price,total_cash,trust_broken";
inline constexpr const char* kAnalyticHeader = "sigma,curve,default_fraction";

/// Banks as read from or written to the banks CSV; day-0 interbank
/// positions are implicitly zero. Rows are validated as they are read.
std::vector<Bank> load_banks(const std::filesystem::path& path, double price0 = 1.0);
std::vector<Bank> parse_banks(std::istream& in, double price0 = 1.0);
void write_banks_csv(const std::vector<Bank>& banks, const std::filesystem::path& path);

struct ShareRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Parameters of the synthetic balance-sheet generator. Defaults describe a
/// 31-bank system with a log-normal size distribution, the five largest
/// banks holding 50-75% of assets, and bond holdings scaled so that the
/// whole system owns about 3e5 units.
struct SyntheticSpec {
    int bank_count = 31;
    double size_log_mean = 0.0;
    double size_log_sd = 1.3;
    ShareRange cash_share{0.015, 0.05};
    ShareRange securities_share{0.15, 0.35};
    ShareRange equity_share{0.07, 0.13};
    ShareRange top5_share{0.50, 0.75};
    double total_securities = 3.0e5;
    std::uint64_t seed = 20131231;
};

/// Deterministic in spec.seed. Values are rounded to 12 significant digits
/// so a write/read cycle through the banks CSV is exact.
std::vector<Bank> generate_synthetic(const SyntheticSpec& spec);

/// Share of total assets held by the five largest banks.
double top5_asset_share(const std::vector<Bank>& banks, double price0 = 1.0);

/// 12-significant-digit rendering shared by all result writers.
std::string format_number(double value);

/// The first line of every result file: "# <fingerprint>".
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& header_comment,
                     const std::filesystem::path& path);
void write_trace_csv(const std::vector<DayReport>& days, const std::string& header_comment,
                     const std::filesystem::path& path);

void write_analytic_csv(const std::vector<AnalyticRow>& rows, const std::string& header_comment,
                        const std::filesystem::path& path);

/// Readers for the result files; comment lines are skipped.
std::vector<SweepPoint> read_sweep_csv(const std::filesystem::path& path);
std::vector<DayReport> read_trace_csv(const std::filesystem::path& path);

}  // namespace ibsim
