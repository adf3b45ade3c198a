#include "ibsim/stochastics.hpp"

#include "ibsim/normal.hpp"

#include <cassert>

namespace ibsim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t realization) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(realization),
                      static_cast<std::uint32_t>(realization >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t realization)
    : seed_(seed), realization_(realization), engine_(make_engine(seed, realization)) {}

double RngStream::next_uniform() {
    ++draws_;
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    return normal_quantile(next_uniform());
}

Money draw_shock(RngStream& rng, Money initial_cash, double sigma) {
    const double z = rng.next_normal();
    return initial_cash * sigma * z;
}

void apply_fluctuations(std::span<Bank> banks, ShockLedger& ledger, RngStream& rng,
                        double sigma) {
    assert(ledger.previous.size() == banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) {
        Bank& bank = banks[i];
        if (!bank.alive()) {
            continue;
        }
        ledger.previous[i] = ledger.current[i];
        ledger.current[i] = draw_shock(rng, bank.initial_cash, sigma);
        bank.cash = bank.cash - ledger.previous[i] + ledger.current[i];
    }
}

}  // namespace ibsim
