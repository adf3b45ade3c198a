#pragma once

// The frozen step-machine scenario: five hand-written banks, ten days, every
// channel and ratio switched on, at a volatility where one bank fails and
// trust breaks mid-run.

#include "ibsim/config.hpp"
#include "ibsim/data_io.hpp"
#include "ibsim/engine.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace ibsim::testing {

inline SimConfig golden_config() {
    SimConfig c;
    c.sigma = 2.5;
    c.eta = 1e-6;
    c.days = 10;
    c.seed = 2013;
    c.interbank = true;
    c.securities_market = true;
    c.trust_effect = true;
    c.ratios = RatioToggles::all();
    return c;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Runs the scenario and returns the trace CSV exactly as written to disk.
inline std::string golden_trace(const std::filesystem::path& banks_csv,
                                const std::filesystem::path& scratch) {
    const SimConfig config = golden_config();
    const SystemState state = make_initial_state(load_banks(banks_csv));
    write_trace_csv(run_simulation(state, config, 0).days, fingerprint(config), scratch);
    return read_file(scratch);
}

}  // namespace ibsim::testing
