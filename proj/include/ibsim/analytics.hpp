#pragma once

#include "ibsim/balance.hpp"
#include "ibsim/engine.hpp"

#include <span>
#include <string>
#include <vector>

namespace ibsim {

/// Which closed form to evaluate. `corrected` compounds daily survival,
/// 1 - (1 - q)^T; `printed` is the historical 1 - q^T, kept for comparison
/// only (it tends to 1 as sigma -> 0).
enum class AnalyticForm { corrected, printed };

/// Probability that a bank with liquid buffer `buffer_over_cash` (in units
/// of its initial cash) defaults within T days under daily i.i.d. shocks.
double compounded_default_probability(double buffer_over_cash, double sigma, int days,
                                      AnalyticForm form = AnalyticForm::corrected);

/// Banks that cannot trade or borrow: per-day default probability Phi(-1/sigma).
double analytic_no_market_fraction(double sigma, int days,
                                   AnalyticForm form = AnalyticForm::corrected);

/// Banks that can liquidate bonds at a fixed price: bank i's buffer is
/// 1 + price0 * securities_i / initial_cash_i. Throws DataError when a bank
/// has no initial cash.
double analytic_securities_fraction(std::span<const Bank> banks, double price0, double sigma,
                                    int days, AnalyticForm form = AnalyticForm::corrected);

double default_fraction(const SimulationResult& result);

struct SweepPoint {
    double sigma = 0.0;
    std::string config_id;
    double mean_default_fraction = 0.0;
    double std_error = 0.0;
    int n_realizations = 0;
    int n_failed = 0;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// One point of a closed-form curve.
struct AnalyticRow {
    double sigma = 0.0;
    std::string curve;
    double default_fraction = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n)) of per-realization default
/// fractions, accumulated in the given order.
SweepPoint aggregate_sweep(double sigma, std::string config_id,
                           std::span<const double> fractions, int n_failed = 0);

}  // namespace ibsim
