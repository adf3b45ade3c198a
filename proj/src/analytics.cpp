#include "ibsim/analytics.hpp"

#include "ibsim/normal.hpp"

#include <cmath>
#include <string>

namespace ibsim {

double compounded_default_probability(double buffer_over_cash, double sigma, int days,
                                      AnalyticForm form) {
    const double q = sigma > 0.0 ? normal_cdf(-buffer_over_cash / sigma) : 0.0;
    if (form == AnalyticForm::printed) {
        return 1.0 - std::pow(q, days);
    }
    // 1 - (1 - q)^T without cancellation for small q.
    return -std::expm1(static_cast<double>(days) * std::log1p(-q));
}

double analytic_no_market_fraction(double sigma, int days, AnalyticForm form) {
    return compounded_default_probability(1.0, sigma, days, form);
}

double analytic_securities_fraction(std::span<const Bank> banks, double price0, double sigma,
                                    int days, AnalyticForm form) {
    if (banks.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const Bank& bank : banks) {
        if (!(bank.initial_cash > 0.0)) {
            throw DataError("bank " + std::to_string(bank.id.value) +
                            ": initial cash must be positive for the securities baseline");
        }
        const double buffer = 1.0 + price0 * bank.securities / bank.initial_cash;
        sum += compounded_default_probability(buffer, sigma, days, form);
    }
    return sum / static_cast<double>(banks.size());
}

double default_fraction(const SimulationResult& result) {
    if (result.bank_count == 0) {
        return 0.0;
    }
    return static_cast<double>(result.defaulted_count()) /
           static_cast<double>(result.bank_count);
}

SweepPoint aggregate_sweep(double sigma, std::string config_id,
                           std::span<const double> fractions, int n_failed) {
    SweepPoint point;
    point.sigma = sigma;
    point.config_id = std::move(config_id);
    point.n_realizations = static_cast<int>(fractions.size());
    point.n_failed = n_failed;
    if (fractions.empty()) {
        return point;
    }
    const double n = static_cast<double>(fractions.size());
    double sum = 0.0;
    for (double f : fractions) {
        sum += f;
    }
    const double mean = sum / n;
    double sq = 0.0;
    for (double f : fractions) {
        sq += (f - mean) * (f - mean);
    }
    point.mean_default_fraction = mean;
    point.std_error = fractions.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
    return point;
}

}  // namespace ibsim
