#pragma once

#include "ibsim/balance.hpp"
#include "ibsim/config.hpp"
#include "ibsim/stochastics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ibsim {

/// Raised when a clearing step would move the bond price to zero or below,
/// i.e. eta * |ED| >= 1, outside the model's range of validity.
class PriceCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoanEntry {
    std::size_t creditor = 0;  // index into SystemState::banks
    std::size_t debtor = 0;
    Money amount = 0.0;

    friend bool operator==(const LoanEntry&, const LoanEntry&) = default;
};

/// Today's overnight loans; at most one entry per ordered pair, all amounts > 0.
using LoanBook = std::vector<LoanEntry>;

struct SystemState {
    std::vector<Bank> banks;  // ascending id
    LoanBook loan_book;
    double price = 1.0;
    bool trust_broken = false;
    int day = 0;  // last simulated day, 0 before the first

    std::size_t defaulted_count() const;
    Money total_cash() const;
};

/// Sorts by id, rejects an empty set and duplicates, sets initial_cash and
/// calibrates floors.
SystemState make_initial_state(std::vector<Bank> banks, double price0 = 1.0);

/// Signed per-bank cash position for the interbank stage: negative entries
/// are supply offered to lenders, positive entries are unmet need.
struct CashPlan {
    std::vector<Money> position;

    Money supply(std::size_t i) const { return position[i] < 0.0 ? -position[i] : 0.0; }
    Money demand(std::size_t i) const { return position[i] > 0.0 ? position[i] : 0.0; }
};

struct ClearingReport {
    BondUnits excess_demand = 0.0;
    double old_price = 1.0;
    double new_price = 1.0;
    std::vector<BondUnits> executed;
};

struct DayReport {
    int day = 0;
    int new_defaults = 0;
    int defaults_cum = 0;
    Money loan_volume = 0.0;
    double bond_price = 1.0;
    Money total_cash = 0.0;
    bool trust_broken = false;
    Money write_offs = 0.0;
    BondUnits excess_demand = 0.0;

    friend bool operator==(const DayReport&, const DayReport&) = default;
};

struct SimulationResult {
    std::size_t bank_count = 0;
    std::vector<std::optional<int>> default_day;  // per bank, ascending id
    std::vector<int> default_histogram;           // index = day, 0 unused
    std::vector<DayReport> days;

    std::size_t defaulted_count() const;
};

// Daily steps, in execution order. Each is usable on its own for tests.

/// Live debtors pay creditors in full, possibly overdrawing; loans to
/// defaulted debtors are written off. Empties the book and resets interbank
/// positions. Returns the total written off.
Money repay_overnight_loans(SystemState& state);

/// Redeems deposits until leverage is back at its floor, bounded by the
/// reserve and liquidity floors and by the deposit base. Returns the amount.
Money leverage_repurchase(Bank& bank, double price);

CashPlan compute_cash_plan(const SystemState& state, const SimConfig& config);

/// Loan(i -> j) = Total * supply_i / sum(supply) * demand_j / sum(demand),
/// Total = min(sum(supply), sum(demand)).
LoanBook match_interbank(const CashPlan& plan);

/// Moves cash and books interbank assets/liabilities for each entry and
/// stores the book in the state.
void settle_loans(SystemState& state, LoanBook book);

/// (cash - reserve_floor * deposits) / price, never below -securities.
BondUnits compute_securities_demand(const Bank& bank, double price);

/// Moves the price by (1 + eta * ED) and executes every order at the new
/// price. Throws PriceCollapse when the factor is not positive.
ClearingReport clear_securities_market(SystemState& state, std::span<const BondUnits> demands,
                                       double eta);

/// Marks every live bank with cash < 0 and breaks trust if any bank has
/// ever defaulted. Returns the indices of new defaults.
std::vector<std::size_t> mark_defaults(SystemState& state);

DayReport simulate_day(SystemState& state, ShockLedger& ledger, const SimConfig& config,
                       RngStream& rng);

/// Runs config.days days of realization `realization` on a copy of the
/// state, drawing from RngStream(config.seed, realization).
SimulationResult run_simulation(const SystemState& initial, const SimConfig& config,
                                std::uint64_t realization = 0);

}  // namespace ibsim
