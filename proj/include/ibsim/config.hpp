#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ibsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optional ratios a bank honors on top of reserve and liquidity, which are
/// always enforced.
struct RatioToggles {
    bool leverage = false;
    bool car = false;
    bool large_exposure = false;

    static RatioToggles all() { return {true, true, true}; }
    friend bool operator==(const RatioToggles&, const RatioToggles&) = default;
};

/// Parses "reserve,liquidity[,leverage,car,large-exposure]". Reserve and
/// liquidity must be present.
RatioToggles parse_ratio_list(std::string_view text);
std::string format_ratio_list(const RatioToggles& toggles);

inline constexpr int kMaxApplicableDays = 60;

struct SimConfig {
    double sigma = 0.0;
    double eta = 1e-6;
    int days = 60;
    int realizations = 100;
    std::uint64_t seed = 42;
    bool interbank = true;
    bool securities_market = true;
    bool trust_effect = false;
    double trust_fraction = 0.2;
    RatioToggles ratios;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Throws ConfigError on out-of-range values; returns warnings for
/// accepted-but-unusual settings (a horizon past 60 days).
std::vector<std::string> validate(const SimConfig& config);

/// Model settings that identify a curve (everything except sigma, seed and
/// ensemble size). Safe to use as a file name.
std::string curve_id(const SimConfig& config);

/// Canonical rendering of every field; equal configs give equal strings.
std::string fingerprint(const SimConfig& config);

/// Shortest round-trip decimal rendering used in identifiers.
std::string format_shortest(double value);

}  // namespace ibsim
