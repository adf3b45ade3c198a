#include "ibsim/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ibsim {

std::size_t SystemState::defaulted_count() const {
    return static_cast<std::size_t>(
        std::count_if(banks.begin(), banks.end(), [](const Bank& b) { return !b.alive(); }));
}

Money SystemState::total_cash() const {
    Money sum = 0.0;
    for (const Bank& b : banks) {
        sum += b.cash;
    }
    return sum;
}

std::size_t SimulationResult::defaulted_count() const {
    return static_cast<std::size_t>(std::count_if(
        default_day.begin(), default_day.end(), [](const auto& d) { return d.has_value(); }));
}

SystemState make_initial_state(std::vector<Bank> banks, double price0) {
    if (!(price0 > 0.0)) {
        throw DataError("initial bond price must be positive");
    }
    if (banks.empty()) {
        throw DataError("no banks to simulate");
    }
    std::sort(banks.begin(), banks.end(),
              [](const Bank& a, const Bank& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < banks.size(); ++i) {
        if (banks[i].id == banks[i - 1].id) {
            throw DataError("duplicate bank id " + std::to_string(banks[i].id.value));
        }
    }
    for (Bank& bank : banks) {
        bank.initial_cash = bank.cash;
        bank.default_day.reset();
        bank.floors = calibrate_floors(bank, price0);
    }
    SystemState state;
    state.banks = std::move(banks);
    state.price = price0;
    return state;
}

namespace {

// Cash above (positive) or below (negative) the level a floor requires.
// Taken through the ratio so that a bank sitting exactly on its day-0 floor
// sees a gap of exactly zero rather than a rounding residue.
Money gap_to_floor(Money numerator, Money deposits, double floor) {
    if (!(deposits > 0.0)) {
        return numerator;
    }
    return (numerator / deposits - floor) * deposits;
}

}  // namespace

Money repay_overnight_loans(SystemState& state) {
    Money written_off = 0.0;
    for (const LoanEntry& loan : state.loan_book) {
        Bank& debtor = state.banks[loan.debtor];
        if (debtor.alive()) {
            state.banks[loan.creditor].cash += loan.amount;
            debtor.cash -= loan.amount;
        } else {
            written_off += loan.amount;
        }
    }
    state.loan_book.clear();
    for (Bank& bank : state.banks) {
        bank.interbank_assets = 0.0;
        bank.interbank_liabilities = 0.0;
    }
    return written_off;
}

Money leverage_repurchase(Bank& bank, double price) {
    const RatioFloors& f = bank.floors;
    if (at_or_above(compute_ratios(bank, price).leverage, f.leverage_floor)) {
        return 0.0;
    }
    const Money lack = total_assets(bank, price) - equity(bank, price) / f.leverage_floor;
    const Money max_by_reserve =
        std::max((bank.cash - f.reserve_floor * bank.deposits) / (1.0 - f.reserve_floor), 0.0);
    const Money max_by_liquidity =
        std::max((bank.cash + price * bank.securities - f.liquidity_floor * bank.deposits) /
                     (1.0 - f.liquidity_floor),
                 0.0);
    const Money amount =
        std::max(std::min({lack, max_by_liquidity, max_by_reserve, bank.deposits}), 0.0);
    if (amount > 0.0) {
        repurchase_deposits(bank, amount);
    }
    return amount;
}

CashPlan compute_cash_plan(const SystemState& state, const SimConfig& config) {
    const double price = state.price;
    const double trust = (state.trust_broken && config.trust_effect) ? config.trust_fraction : 1.0;
    CashPlan plan;
    plan.position.assign(state.banks.size(), 0.0);
    for (std::size_t i = 0; i < state.banks.size(); ++i) {
        const Bank& bank = state.banks[i];
        if (!bank.alive()) {
            continue;
        }
        const RatioFloors& f = bank.floors;
        const Money reserve_gap = gap_to_floor(bank.cash, bank.deposits, f.reserve_floor);
        const Money liquidity_gap = gap_to_floor(bank.cash + price * bank.securities,
                                                 bank.deposits, f.liquidity_floor);
        if (satisfies_reserve(bank, price) && satisfies_liquidity(bank, price)) {
            Money supply = trust * reserve_gap;
            supply = std::min(supply, std::max(liquidity_gap, 0.0));
            const Money eq = equity(bank, price);
            if (config.ratios.large_exposure) {
                supply = std::min(
                    supply, std::max(f.large_exposure_cap * eq - bank.interbank_assets, 0.0));
            }
            if (config.ratios.car) {
                supply = std::min(
                    supply,
                    std::max(5.0 * (eq / f.car_floor - kLoanRiskWeight * bank.loans), 0.0));
            }
            plan.position[i] = -std::max(supply, 0.0);
        } else {
            plan.position[i] = std::max({-reserve_gap, -liquidity_gap, 0.0});
        }
    }
    return plan;
}

LoanBook match_interbank(const CashPlan& plan) {
    const std::size_t n = plan.position.size();
    Money total_supply = 0.0;
    Money total_demand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total_supply += plan.supply(i);
        total_demand += plan.demand(i);
    }
    LoanBook book;
    if (total_supply <= 0.0 || total_demand <= 0.0) {
        return book;
    }
    const Money total = std::min(total_supply, total_demand);
    for (std::size_t i = 0; i < n; ++i) {
        const Money s = plan.supply(i);
        if (s <= 0.0) {
            continue;
        }
        const Money row = total * (s / total_supply);
        for (std::size_t j = 0; j < n; ++j) {
            const Money d = plan.demand(j);
            if (d <= 0.0) {
                continue;
            }
            const Money amount = row * (d / total_demand);
            if (amount > 0.0) {
                book.push_back({i, j, amount});
            }
        }
    }
    return book;
}

void settle_loans(SystemState& state, LoanBook book) {
    for (const LoanEntry& loan : book) {
        grant_interbank_loan(state.banks[loan.creditor], loan.amount);
        receive_interbank_loan(state.banks[loan.debtor], loan.amount);
    }
    state.loan_book = std::move(book);
}

BondUnits compute_securities_demand(const Bank& bank, double price) {
    const Money gap = gap_to_floor(bank.cash, bank.deposits, bank.floors.reserve_floor);
    return std::max(gap / price, -bank.securities);
}

ClearingReport clear_securities_market(SystemState& state, std::span<const BondUnits> demands,
                                       double eta) {
    ClearingReport report;
    report.old_price = state.price;
    report.excess_demand = std::accumulate(demands.begin(), demands.end(), 0.0);
    const double factor = 1.0 + eta * report.excess_demand;
    if (!(factor > 0.0)) {
        throw PriceCollapse("bond price collapse: eta * ED = " +
                            std::to_string(eta * report.excess_demand));
    }
    report.new_price = state.price * factor;
    state.price = report.new_price;
    report.executed.assign(demands.begin(), demands.end());
    for (std::size_t i = 0; i < state.banks.size(); ++i) {
        if (demands[i] != 0.0) {
            buy_securities(state.banks[i], demands[i], report.new_price);
        }
    }
    return report;
}

std::vector<std::size_t> mark_defaults(SystemState& state) {
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < state.banks.size(); ++i) {
        Bank& bank = state.banks[i];
        if (bank.alive() && bank.cash < 0.0) {
            bank.default_day = state.day;
            fresh.push_back(i);
        }
    }
    if (!fresh.empty()) {
        state.trust_broken = true;
    }
    return fresh;
}

DayReport simulate_day(SystemState& state, ShockLedger& ledger, const SimConfig& config,
                       RngStream& rng) {
    ++state.day;
    DayReport report;
    report.day = state.day;

    if (state.day > 1) {
        report.write_offs = repay_overnight_loans(state);
    }

    apply_fluctuations(state.banks, ledger, rng, config.sigma);

    if (config.ratios.leverage) {
        for (Bank& bank : state.banks) {
            if (bank.alive() && satisfies_reserve(bank, state.price) &&
                satisfies_liquidity(bank, state.price)) {
                leverage_repurchase(bank, state.price);
            }
        }
    }

    if (config.interbank) {
        LoanBook book = match_interbank(compute_cash_plan(state, config));
        for (const LoanEntry& loan : book) {
            report.loan_volume += loan.amount;
        }
        settle_loans(state, std::move(book));
    }

    if (config.securities_market) {
        std::vector<BondUnits> demands(state.banks.size(), 0.0);
        for (std::size_t i = 0; i < state.banks.size(); ++i) {
            if (state.banks[i].alive()) {
                demands[i] = compute_securities_demand(state.banks[i], state.price);
            }
        }
        report.excess_demand = clear_securities_market(state, demands, config.eta).excess_demand;
    }

    report.new_defaults = static_cast<int>(mark_defaults(state).size());
    report.defaults_cum = static_cast<int>(state.defaulted_count());
    report.bond_price = state.price;
    report.total_cash = state.total_cash();
    report.trust_broken = state.trust_broken;
    return report;
}

SimulationResult run_simulation(const SystemState& initial, const SimConfig& config,
                                std::uint64_t realization) {
    SystemState state = initial;
    ShockLedger ledger(state.banks.size());
    RngStream rng(config.seed, realization);
    SimulationResult result;
    result.bank_count = state.banks.size();
    result.days.reserve(static_cast<std::size_t>(config.days));
    for (int d = 0; d < config.days; ++d) {
        result.days.push_back(simulate_day(state, ledger, config, rng));
    }
    result.default_histogram.assign(static_cast<std::size_t>(config.days) + 1, 0);
    result.default_day.reserve(state.banks.size());
    for (const Bank& bank : state.banks) {
        result.default_day.push_back(bank.default_day);
        if (bank.default_day) {
            ++result.default_histogram[static_cast<std::size_t>(*bank.default_day)];
        }
    }
    return result;
}

}  // namespace ibsim
