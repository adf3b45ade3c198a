#pragma once

#include "ibsim/balance.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ibsim {

/// Seeded source of standard-normal draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each normal draw consumes exactly one 64-bit word: the top 53
/// bits give u = (k + 0.5) / 2^53 in (0, 1), mapped through the AS241 inverse
/// CDF. Realization r of a run seeded with s uses
/// std::seed_seq{lo32(s), hi32(s), lo32(r), hi32(r)}; the seed_seq algorithm
/// is also standard-specified, so streams are portable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t realization = 0);

    double next_uniform();
    double next_normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t realization() const { return realization_; }
    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t seed_;
    std::uint64_t realization_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

/// initial_cash * sigma * z, always consuming one normal draw.
Money draw_shock(RngStream& rng, Money initial_cash, double sigma);

/// Yesterday's shock per bank (indexed like the bank vector), reverted
/// before today's is applied.
struct ShockLedger {
    std::vector<Money> previous;
    std::vector<Money> current;

    explicit ShockLedger(std::size_t bank_count = 0)
        : previous(bank_count, 0.0), current(bank_count, 0.0) {}
};

/// Reverts yesterday's shock and applies a fresh one to every live bank, in
/// vector order (callers keep banks sorted by ascending id). Defaulted banks
/// draw nothing and keep their ledger entries.
void apply_fluctuations(std::span<Bank> banks, ShockLedger& ledger, RngStream& rng,
                        double sigma);

}  // namespace ibsim
