#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ibsim/data_io.hpp"
#include "ibsim/engine.hpp"
#include "invariants.hpp"
#include "test_support.hpp"

#include <vector>

using namespace ibsim;

namespace {

Bank plain_bank(std::uint32_t id, double cash, double deposits, double loans,
                double securities = 0.0) {
    Bank b;
    b.id.value = id;
    b.cash = cash;
    b.initial_cash = cash;
    b.deposits = deposits;
    b.loans = loans;
    b.securities = securities;
    return b;
}

SystemState two_bank_state() {
    SystemState s;
    s.banks = {plain_bank(1, 100.0, 500.0, 480.0), plain_bank(2, 50.0, 300.0, 290.0)};
    return s;
}

}  // namespace

TEST_CASE("make_initial_state") {
    std::vector<Bank> banks = {plain_bank(5, 35.0, 1000.0, 1000.0, 50.0),
                               plain_bank(2, 20.0, 400.0, 420.0, 10.0)};
    const SystemState s = make_initial_state(banks);
    REQUIRE(s.banks.size() == 2);
    CHECK(s.banks[0].id.value == 2);
    CHECK(s.banks[1].floors.reserve_floor == doctest::Approx(0.035));
    CHECK(s.banks[1].initial_cash == 35.0);
    CHECK_FALSE(s.trust_broken);
    CHECK(s.day == 0);

    banks.push_back(plain_bank(5, 1.0, 10.0, 10.0));
    CHECK_THROWS_AS(make_initial_state(banks), DataError);
}

TEST_CASE("repay_overnight_loans") {
    SUBCASE("empty book") {
        SystemState s = two_bank_state();
        CHECK(repay_overnight_loans(s) == 0.0);
        CHECK(s.banks[0].cash == 100.0);
        CHECK(s.banks[1].cash == 50.0);
    }
    SUBCASE("live debtor repays in full") {
        SystemState s = two_bank_state();
        settle_loans(s, {{0, 1, 10.0}});
        const double total = s.total_cash();
        CHECK(repay_overnight_loans(s) == 0.0);
        CHECK(s.banks[0].cash == 100.0);
        CHECK(s.banks[1].cash == 50.0);
        CHECK(s.total_cash() == total);
        CHECK(s.loan_book.empty());
        CHECK(s.banks[0].interbank_assets == 0.0);
        CHECK(s.banks[1].interbank_liabilities == 0.0);
    }
    SUBCASE("defaulted debtor: the creditor absorbs the loss") {
        SystemState s = two_bank_state();
        settle_loans(s, {{0, 1, 10.0}});
        s.banks[1].default_day = 1;
        const double equity_before = equity(s.banks[0], 1.0);
        CHECK(repay_overnight_loans(s) == 10.0);
        CHECK(s.banks[0].cash == 90.0);
        CHECK(equity(s.banks[0], 1.0) == equity_before - 10.0);
    }
    SUBCASE("a live debtor still repays a defaulted creditor") {
        SystemState s = two_bank_state();
        settle_loans(s, {{0, 1, 10.0}});
        s.banks[0].default_day = 1;
        CHECK(repay_overnight_loans(s) == 0.0);
        CHECK(s.banks[0].cash == 100.0);
        CHECK(s.banks[1].cash == 50.0);
    }
    SUBCASE("repayment may overdraw the debtor") {
        SystemState s = two_bank_state();
        settle_loans(s, {{0, 1, 10.0}});
        s.banks[1].cash = 3.0;
        repay_overnight_loans(s);
        CHECK(s.banks[1].cash == -7.0);
    }
}

TEST_CASE("leverage_repurchase") {
    // equity 8 on total assets 110; the caps are slack
    Bank b = plain_bank(1, 20.0, 102.0, 90.0);
    b.floors.leverage_floor = 0.08;
    REQUIRE(equity(b, 1.0) == 8.0);
    REQUIRE(total_assets(b, 1.0) == 110.0);

    SUBCASE("restores leverage to the floor") {
        CHECK(leverage_repurchase(b, 1.0) == doctest::Approx(10.0));
        CHECK(*compute_ratios(b, 1.0).leverage == doctest::Approx(0.08));
        CHECK(b.deposits == doctest::Approx(92.0));
        CHECK(b.cash == doctest::Approx(10.0));
    }
    SUBCASE("nothing to do at or above the floor") {
        b.floors.leverage_floor = 8.0 / 110.0;
        CHECK(leverage_repurchase(b, 1.0) == 0.0);
        CHECK(b.cash == 20.0);
    }
    SUBCASE("reserve exactly at its floor blocks the repurchase") {
        b.floors.reserve_floor = 20.0 / 102.0;
        CHECK(leverage_repurchase(b, 1.0) < 1e-12);
        CHECK(b.deposits == doctest::Approx(102.0));
    }
    SUBCASE("the liquidity cap binds") {
        b.securities = 0.0;
        b.floors.liquidity_floor = 0.15;
        // (cash - 0.15 * D) / 0.85 = (20 - 15.3) / 0.85, short of the lack of 10
        CHECK(leverage_repurchase(b, 1.0) == doctest::Approx(4.7 / 0.85));
        CHECK(*compute_ratios(b, 1.0).liquidity == doctest::Approx(0.15));
    }
}

TEST_CASE("compute_cash_plan") {
    SimConfig config;
    SystemState s;
    s.banks = {plain_bank(1, 85.0, 1000.0, 1000.0, 100.0)};
    s.banks[0].floors.reserve_floor = 0.035;
    s.banks[0].floors.liquidity_floor = 0.035;

    SUBCASE("surplus is offered in full while trust holds") {
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(50.0));
    }
    SUBCASE("broken trust offers a fifth of the surplus") {
        s.trust_broken = true;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(50.0));
        config.trust_effect = true;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(10.0));
        config.trust_fraction = 0.5;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(25.0));
    }
    SUBCASE("reserve shortfall becomes demand") {
        s.banks[0].cash = 30.0;
        const CashPlan plan = compute_cash_plan(s, config);
        CHECK(plan.demand(0) == doctest::Approx(5.0));
        CHECK(plan.supply(0) == 0.0);
    }
    SUBCASE("liquidity shortfall dominates when larger") {
        s.banks[0].cash = 30.0;
        s.banks[0].securities = 0.0;
        s.banks[0].floors.liquidity_floor = 0.04;
        CHECK(compute_cash_plan(s, config).demand(0) == doctest::Approx(10.0));
    }
    SUBCASE("exactly at both floors: no supply, no demand") {
        s.banks[0].cash = 35.0;
        s.banks[0].securities = 0.0;
        const CashPlan plan = compute_cash_plan(s, config);
        CHECK(plan.supply(0) == 0.0);
        CHECK(plan.demand(0) == 0.0);
    }
    SUBCASE("liquidity headroom caps supply") {
        s.banks[0].securities = 0.0;
        s.banks[0].floors.liquidity_floor = 0.07;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(15.0));
    }
    SUBCASE("large-exposure cap") {
        // equity = 85 + 100 + 1000 - 1000 = 185; cap 0.25 * 185 = 46.25
        config.ratios.large_exposure = true;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(46.25));
        s.banks[0].interbank_assets = 40.0;
        s.banks[0].cash = 85.0;
        s.banks[0].deposits = 1040.0;  // keep equity and the reserve surplus close
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(0.25 * 185.0 - 40.0));
    }
    SUBCASE("capital cap") {
        // room = 5 * (E / car_floor - 0.9 * loans) = 5 * (185 / 0.2 - 900) = 125
        config.ratios.car = true;
        s.banks[0].floors.car_floor = 0.2;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(50.0));
        s.banks[0].floors.car_floor = 185.0 / 905.0;
        CHECK(compute_cash_plan(s, config).supply(0) == doctest::Approx(25.0));
    }
    SUBCASE("defaulted banks neither lend nor borrow") {
        s.banks[0].default_day = 3;
        CHECK(compute_cash_plan(s, config).position[0] == 0.0);
    }
}

TEST_CASE("match_interbank") {
    SUBCASE("proportional fitting") {
        CashPlan plan;
        plan.position = {-100.0, -300.0, 50.0, 150.0};
        const LoanBook book = match_interbank(plan);
        const LoanBook expected = {{0, 2, 12.5}, {0, 3, 37.5}, {1, 2, 37.5}, {1, 3, 112.5}};
        CHECK(book == expected);

        SystemState s;
        s.banks = {plain_bank(1, 100, 1, 0), plain_bank(2, 300, 1, 0), plain_bank(3, 0, 1, 0),
                   plain_bank(4, 0, 1, 0)};
        settle_loans(s, book);
        CHECK(s.banks[0].cash == 50.0);
        CHECK(s.banks[1].cash == 150.0);
        CHECK(s.banks[2].cash == 50.0);
        CHECK(s.banks[3].cash == 150.0);
        CHECK(s.banks[0].interbank_assets == 50.0);
        CHECK(s.banks[3].interbank_liabilities == 150.0);
        CHECK(s.loan_book == expected);
    }
    SUBCASE("no suppliers") {
        CashPlan plan;
        plan.position = {0.0, 20.0, 30.0};
        CHECK(match_interbank(plan).empty());
    }
    SUBCASE("single pair lends min(S, D)") {
        CashPlan plan;
        plan.position = {40.0, -25.0};
        const LoanBook book = match_interbank(plan);
        REQUIRE(book.size() == 1);
        CHECK(book[0] == LoanEntry{1, 0, 25.0});
    }
}

TEST_CASE("compute_securities_demand") {
    Bank b = plain_bank(1, 35.0, 1000.0, 1000.0, 5.0);
    b.floors.reserve_floor = 0.035;
    CHECK(compute_securities_demand(b, 1.0) == 0.0);
    b.cash = 23.0;  // deficit 12, only 5 units to sell
    CHECK(compute_securities_demand(b, 1.0) == -5.0);
    b.cash = 33.0;  // deficit 2
    CHECK(compute_securities_demand(b, 1.0) == doctest::Approx(-2.0));
    b.cash = 55.0;  // surplus 20
    CHECK(compute_securities_demand(b, 0.8) == doctest::Approx(25.0));
}

TEST_CASE("clear_securities_market") {
    SUBCASE("eta zero is a barter at the old price") {
        SystemState s = two_bank_state();
        s.banks[1].securities = 10.0;
        s.price = 0.9;
        const std::vector<BondUnits> demands = {4.0, -10.0};
        const ClearingReport r = clear_securities_market(s, demands, 0.0);
        CHECK(r.new_price == 0.9);
        CHECK(r.excess_demand == -6.0);
        CHECK(s.banks[0].cash == doctest::Approx(100.0 - 3.6));
        CHECK(s.banks[0].securities == 4.0);
        CHECK(s.banks[1].cash == doctest::Approx(59.0));
        CHECK(s.banks[1].securities == 0.0);
    }
    SUBCASE("selling 30000 units at eta 1e-6 moves the price down 3%") {
        SystemState s = two_bank_state();
        s.banks[1].securities = 30000.0;
        const std::vector<BondUnits> demands = {0.0, -30000.0};
        const ClearingReport r = clear_securities_market(s, demands, 1e-6);
        CHECK(r.old_price == 1.0);
        CHECK(r.new_price == doctest::Approx(0.97));
        CHECK(s.price == doctest::Approx(0.97));
        // the seller gets the post-impact price
        CHECK(s.banks[1].cash == doctest::Approx(50.0 + 30000.0 * 0.97));
    }
    SUBCASE("a non-positive price is an error") {
        SystemState s = two_bank_state();
        s.banks[1].securities = 2e6;
        const std::vector<BondUnits> demands = {0.0, -2e6};
        CHECK_THROWS_AS(clear_securities_market(s, demands, 1e-6), PriceCollapse);
    }
}

TEST_CASE("mark_defaults") {
    SystemState s = two_bank_state();
    s.day = 4;
    CHECK(mark_defaults(s).empty());
    CHECK_FALSE(s.trust_broken);

    s.banks[0].cash = 0.0;
    CHECK(mark_defaults(s).empty());

    s.banks[1].cash = -0.01;
    const auto fresh = mark_defaults(s);
    REQUIRE(fresh.size() == 1);
    CHECK(fresh[0] == 1);
    CHECK(s.banks[1].default_day == 4);
    CHECK(s.trust_broken);

    // already defaulted banks are not reported again, and trust stays broken
    s.banks[1].cash = 5.0;
    s.day = 5;
    CHECK(mark_defaults(s).empty());
    CHECK(s.banks[1].default_day == 4);
    CHECK(s.trust_broken);
}

TEST_CASE("simulate_day and run_simulation") {
    const SystemState initial = make_initial_state(generate_synthetic(SyntheticSpec{}));

    SUBCASE("sigma zero is a fixed point") {
        SimConfig config;
        config.ratios = RatioToggles::all();
        config.trust_effect = true;
        SystemState s = initial;
        ShockLedger ledger(s.banks.size());
        RngStream rng(config.seed, 0);
        for (int d = 1; d <= 5; ++d) {
            const DayReport r = simulate_day(s, ledger, config, rng);
            CHECK(r.day == d);
            CHECK(r.new_defaults == 0);
            CHECK(r.loan_volume == 0.0);
            CHECK(r.bond_price == 1.0);
        }
        for (std::size_t i = 0; i < s.banks.size(); ++i) {
            CHECK(s.banks[i].cash == initial.banks[i].cash);
            CHECK(s.banks[i].securities == initial.banks[i].securities);
        }
    }
    SUBCASE("large shocks without markets wipe out the system") {
        SimConfig config;
        config.sigma = 8.0;
        config.interbank = false;
        config.securities_market = false;
        const SimulationResult r = run_simulation(initial, config, 0);
        CHECK(default_fraction(r) > 0.9);
        int histogram_total = 0;
        for (int n : r.default_histogram) histogram_total += n;
        CHECK(histogram_total == static_cast<int>(r.defaulted_count()));
        CHECK(r.days.back().defaults_cum == histogram_total);
    }
    SUBCASE("repeated runs are bit-identical") {
        SimConfig config;
        config.sigma = 2.0;
        config.trust_effect = true;
        config.ratios = RatioToggles::all();
        const SimulationResult a = run_simulation(initial, config, 7);
        const SimulationResult b = run_simulation(initial, config, 7);
        CHECK(a.days == b.days);
        CHECK(a.default_day == b.default_day);
        const SimulationResult c = run_simulation(initial, config, 8);
        CHECK_FALSE(a.days == c.days);
    }
}

TEST_CASE("engine invariants over random small systems") {
    testing::Violations v;
    testing::check_engine_invariants(1234, 1500, v);
    INFO(v.summary());
    CHECK(v.clean());
    for (const char* name : {"cash conservation", "loan marginals", "equity neutrality",
                             "no lending into breach", "deficit priority",
                             "default monotonicity", "trust monotonicity", "determinism",
                             "step order"}) {
        CAPTURE(name);
        CHECK(v.checked(name) >= 1000);
    }
}

TEST_CASE("isolated banks default exactly when the shock exceeds initial cash") {
    testing::Violations v;
    testing::check_isolated_defaults(99, 1000, v);
    INFO(v.summary());
    CHECK(v.clean());
}
