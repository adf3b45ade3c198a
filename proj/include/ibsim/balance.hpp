#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ibsim {

using Money = double;
using BondUnits = double;

struct BankId {
    std::uint32_t value = 0;
    friend auto operator<=>(const BankId&, const BankId&) = default;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Day-0 ratio values each bank treats as its own regulatory minimum.
/// The large-exposure cap is the statutory 25% rather than a calibrated value.
struct RatioFloors {
    double reserve_floor = 0.0;
    double liquidity_floor = 0.0;
    double leverage_floor = 0.0;
    double car_floor = 0.0;
    double large_exposure_cap = 0.25;
};

inline constexpr double kLargeExposureCap = 0.25;
inline constexpr double kLoanRiskWeight = 0.9;
inline constexpr double kInterbankRiskWeight = 0.2;

struct Bank {
    BankId id;
    std::string name;
    Money loans = 0.0;
    Money cash = 0.0;
    BondUnits securities = 0.0;
    Money interbank_assets = 0.0;
    Money deposits = 0.0;
    Money interbank_liabilities = 0.0;
    Money initial_cash = 0.0;
    RatioFloors floors;
    std::optional<int> default_day;

    bool alive() const { return !default_day.has_value(); }
};

/// A ratio whose denominator vanished is stored as std::nullopt.
using Ratio = std::optional<double>;

struct RatioSet {
    Ratio reserve;
    Ratio liquidity;
    Ratio leverage;
    Ratio car;
    Ratio large_exposure;

    friend bool operator==(const RatioSet&, const RatioSet&) = default;
};

Money total_assets(const Bank& bank, double price);
Money equity(const Bank& bank, double price);
Money risk_weighted_assets(const Bank& bank);

RatioSet compute_ratios(const Bank& bank, double price);

/// Undefined ratios never satisfy a floor.
inline bool at_or_above(const Ratio& ratio, double floor) {
    return ratio.has_value() && *ratio >= floor;
}

bool satisfies_reserve(const Bank& bank, double price);
bool satisfies_liquidity(const Bank& bank, double price);

/// Throws DataError for non-positive deposits or equity, non-zero interbank
/// positions, or a reserve/liquidity floor at or above 1.
RatioFloors calibrate_floors(const Bank& bank, double price0);

// The five bank actions. None of them moves equity at a fixed price.
void grant_interbank_loan(Bank& bank, Money amount);
void receive_interbank_loan(Bank& bank, Money amount);
void buy_securities(Bank& bank, BondUnits quantity, double price);
void sell_securities(Bank& bank, BondUnits quantity, double price);
void repurchase_deposits(Bank& bank, Money amount);

}  // namespace ibsim
