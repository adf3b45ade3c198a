#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "golden.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

// Set IBSIM_UPDATE_GOLDEN=1 to rewrite the frozen trace after an intended
// change to the step machine.
TEST_CASE("golden trace is byte-identical") {
    const fs::path data = IBSIM_TEST_DATA;
    const fs::path scratch = fs::temp_directory_path() / "ibsim_golden_trace.csv";
    const std::string produced = ibsim::testing::golden_trace(data / "golden_banks.csv", scratch);

    if (const char* update = std::getenv("IBSIM_UPDATE_GOLDEN"); update && *update == '1') {
        std::ofstream(data / "golden_trace.csv", std::ios::binary) << produced;
    }
    const std::string frozen = ibsim::testing::read_file(data / "golden_trace.csv");
    REQUIRE_FALSE(frozen.empty());
    CHECK(produced == frozen);

    // the scenario exercises what it is meant to
    const auto days = ibsim::read_trace_csv(data / "golden_trace.csv");
    REQUIRE(days.size() == 10);
    CHECK(days.back().defaults_cum >= 1);
    CHECK(days.back().trust_broken);
    CHECK_FALSE(days.front().trust_broken);
}
