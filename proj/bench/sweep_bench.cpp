// Serial reference vs OpenMP sweep over the default synthetic system.
// Usage: ibsim_bench [realizations]   (OMP_NUM_THREADS controls the pool)

#include "ibsim/data_io.hpp"
#include "ibsim/sweep.hpp"

#include <omp.h>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace ibsim;
    const SystemState initial = make_initial_state(generate_synthetic(SyntheticSpec{}));
    SimConfig config;
    config.interbank = true;
    config.securities_market = true;
    config.trust_effect = true;
    config.realizations = argc > 1 ? std::atoi(argv[1]) : 100;
    const auto grid = default_sigma_grid();

    const SweepResult serial = run_sweep(initial, grid, config, Execution::serial);
    const SweepResult parallel = run_sweep(initial, grid, config, Execution::parallel);

    const bool same = serial.points == parallel.points;
    std::cout << "grid points   " << grid.size() << "\nrealizations  " << config.realizations
              << "\nthreads       " << omp_get_max_threads() << "\nserial        "
              << serial.wall_seconds << " s\nparallel      " << parallel.wall_seconds
              << " s\nspeedup       " << serial.wall_seconds / parallel.wall_seconds
              << "\nidentical     " << (same ? "yes" : "NO") << '\n';
    return same ? 0 : 1;
}
