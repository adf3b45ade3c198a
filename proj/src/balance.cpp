#include "ibsim/balance.hpp"

namespace ibsim {

namespace {

Ratio safe_ratio(double numerator, double denominator) {
    if (denominator == 0.0) {
        return std::nullopt;
    }
    return numerator / denominator;
}

}  // namespace

Money total_assets(const Bank& bank, double price) {
    return bank.loans + bank.cash + price * bank.securities + bank.interbank_assets;
}

Money equity(const Bank& bank, double price) {
    return total_assets(bank, price) - (bank.deposits + bank.interbank_liabilities);
}

Money risk_weighted_assets(const Bank& bank) {
    return kLoanRiskWeight * bank.loans + kInterbankRiskWeight * bank.interbank_assets;
}

RatioSet compute_ratios(const Bank& bank, double price) {
    const Money eq = equity(bank, price);
    RatioSet r;
    r.reserve = safe_ratio(bank.cash, bank.deposits);
    r.liquidity = safe_ratio(bank.cash + price * bank.securities, bank.deposits);
    r.leverage = safe_ratio(eq, total_assets(bank, price));
    r.car = safe_ratio(eq, risk_weighted_assets(bank));
    r.large_exposure = safe_ratio(bank.interbank_assets, eq);
    return r;
}

bool satisfies_reserve(const Bank& bank, double price) {
    return at_or_above(compute_ratios(bank, price).reserve, bank.floors.reserve_floor);
}

bool satisfies_liquidity(const Bank& bank, double price) {
    return at_or_above(compute_ratios(bank, price).liquidity, bank.floors.liquidity_floor);
}

RatioFloors calibrate_floors(const Bank& bank, double price0) {
    const auto who = [&] { return "bank " + std::to_string(bank.id.value); };
    if (!(price0 > 0.0)) {
        throw DataError("initial bond price must be positive");
    }
    if (!(bank.deposits > 0.0)) {
        throw DataError(who() + ": deposits must be positive at day 0");
    }
    if (bank.interbank_assets != 0.0 || bank.interbank_liabilities != 0.0) {
        throw DataError(who() + ": interbank positions must be zero at day 0");
    }
    const Money eq = equity(bank, price0);
    if (!(eq > 0.0)) {
        throw DataError(who() + ": equity must be positive at day 0");
    }
    const RatioSet r = compute_ratios(bank, price0);
    if (!r.car) {
        throw DataError(who() + ": risk-weighted assets are zero, capital ratio undefined");
    }
    RatioFloors floors;
    floors.reserve_floor = *r.reserve;
    floors.liquidity_floor = *r.liquidity;
    floors.leverage_floor = *r.leverage;
    floors.car_floor = *r.car;
    floors.large_exposure_cap = kLargeExposureCap;
    // The repurchase caps divide by (1 - floor).
    if (floors.reserve_floor >= 1.0 || floors.liquidity_floor >= 1.0) {
        throw DataError(who() + ": reserve and liquidity floors must be below 1");
    }
    return floors;
}

void grant_interbank_loan(Bank& bank, Money amount) {
    bank.cash -= amount;
    bank.interbank_assets += amount;
}

void receive_interbank_loan(Bank& bank, Money amount) {
    bank.cash += amount;
    bank.interbank_liabilities += amount;
}

void buy_securities(Bank& bank, BondUnits quantity, double price) {
    bank.cash -= quantity * price;
    bank.securities += quantity;
}

void sell_securities(Bank& bank, BondUnits quantity, double price) {
    bank.cash += quantity * price;
    bank.securities -= quantity;
}

void repurchase_deposits(Bank& bank, Money amount) {
    bank.cash -= amount;
    bank.deposits -= amount;
}

}  // namespace ibsim
