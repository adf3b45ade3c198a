#include "ibsim/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ibsim {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

RatioToggles parse_ratio_list(std::string_view text) {
    RatioToggles toggles;
    bool reserve = false;
    bool liquidity = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        const std::string item = trim(text.substr(start, end - start));
        if (item == "reserve") {
            reserve = true;
        } else if (item == "liquidity") {
            liquidity = true;
        } else if (item == "leverage") {
            toggles.leverage = true;
        } else if (item == "car") {
            toggles.car = true;
        } else if (item == "large-exposure") {
            toggles.large_exposure = true;
        } else {
            throw ConfigError("unknown ratio '" + item + "'");
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (!reserve || !liquidity) {
        throw ConfigError("ratio set must include reserve and liquidity");
    }
    return toggles;
}

std::string format_ratio_list(const RatioToggles& toggles) {
    std::string out = "reserve,liquidity";
    if (toggles.leverage) out += ",leverage";
    if (toggles.car) out += ",car";
    if (toggles.large_exposure) out += ",large-exposure";
    return out;
}

std::vector<std::string> validate(const SimConfig& config) {
    std::vector<std::string> warnings;
    if (!(config.sigma >= 0.0) || !std::isfinite(config.sigma)) {
        throw ConfigError("sigma must be a finite value >= 0");
    }
    if (!(config.eta >= 0.0) || !std::isfinite(config.eta)) {
        throw ConfigError("eta must be a finite value >= 0");
    }
    if (config.days < 1) {
        throw ConfigError("days must be >= 1");
    }
    if (config.realizations < 1) {
        throw ConfigError("realizations must be >= 1");
    }
    if (!(config.trust_fraction >= 0.0 && config.trust_fraction <= 1.0)) {
        throw ConfigError("trust-fraction must lie in [0, 1]");
    }
    if (config.days > kMaxApplicableDays) {
        warnings.push_back("horizon of " + std::to_string(config.days) +
                           " days exceeds the 60-day range the model is meant for");
    }
    return warnings;
}

std::string format_shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string curve_id(const SimConfig& config) {
    std::string ratios = "RL";
    if (config.ratios.leverage) ratios += 'V';
    if (config.ratios.car) ratios += 'C';
    if (config.ratios.large_exposure) ratios += 'X';
    std::ostringstream os;
    os << "ib" << config.interbank << "_sec" << config.securities_market << "_eta"
       << format_shortest(config.eta) << "_trust" << config.trust_effect;
    if (config.trust_effect) {
        os << "-" << format_shortest(config.trust_fraction);
    }
    os << "_ratios" << ratios << "_T" << config.days;
    return os.str();
}

std::string fingerprint(const SimConfig& config) {
    std::ostringstream os;
    os << "sigma=" << format_shortest(config.sigma) << ";eta=" << format_shortest(config.eta)
       << ";days=" << config.days << ";realizations=" << config.realizations
       << ";seed=" << config.seed << ";interbank=" << config.interbank
       << ";securities=" << config.securities_market << ";trust=" << config.trust_effect
       << ";trust_fraction=" << format_shortest(config.trust_fraction)
       << ";ratios=" << format_ratio_list(config.ratios);
    return os.str();
}

}  // namespace ibsim
