// ibsim: command-line front end for the overnight interbank simulator.
//
//   ibsim simulate  --sigma 2 --out runs/        one realization, trace CSV
//   ibsim sweep     --grid 0:8:0.25 --out runs/  sigma grid, sweep CSV
//   ibsim figures   --out figs/                  all ablation curves + manifest
//   ibsim analytic  --grid 0:8:0.25 --out figs/  closed-form curves
//   ibsim gen-data  --out data/                  synthetic banks CSV
//   ibsim validate                               Monte Carlo vs closed form
//
// Exit codes: 0 success, 1 validation failed, 2 invalid config or data,
// 3 model error (every realization of some point failed).

#include "ibsim/analytics.hpp"
#include "ibsim/config.hpp"
#include "ibsim/data_io.hpp"
#include "ibsim/engine.hpp"
#include "ibsim/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace ibsim;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitModel = 3;

struct Options {
    SimConfig config;
    std::string ratios = "reserve,liquidity";
    std::string banks;
    std::string out = ".";
    std::string grid;
    bool serial = false;
    bool printed = false;
    std::uint64_t realization = 0;
    int bank_count = 31;
    std::uint64_t data_seed = SyntheticSpec{}.seed;
};

std::vector<Bank> load_or_generate(const Options& opt) {
    if (!opt.banks.empty()) {
        return load_banks(opt.banks);
    }
    return generate_synthetic(SyntheticSpec{});
}

SystemState prepare(Options& opt) {
    opt.config.ratios = parse_ratio_list(opt.ratios);
    for (const std::string& w : validate(opt.config)) {
        std::cerr << "warning: " << w << '\n';
    }
    auto banks = load_or_generate(opt);
    if (banks.empty()) {
        throw DataError("no banks to simulate");
    }
    return make_initial_state(std::move(banks));
}

Execution execution_of(const Options& opt) {
    return opt.serial ? Execution::serial : Execution::parallel;
}

std::vector<double> grid_of(const Options& opt) {
    return opt.grid.empty() ? default_sigma_grid() : parse_sigma_grid(opt.grid);
}

std::string describe_source(const Options& opt) {
    return opt.banks.empty() ? "banks=synthetic-default" : "banks=" + opt.banks;
}

int cmd_simulate(Options& opt) {
    const SystemState initial = prepare(opt);
    const SimulationResult result = run_simulation(initial, opt.config, opt.realization);
    fs::create_directories(opt.out);
    const fs::path path = fs::path(opt.out) / "trace.csv";
    write_trace_csv(result.days,
                    fingerprint(opt.config) + ";realization=" + std::to_string(opt.realization) +
                        ";" + describe_source(opt),
                    path);
    std::cout << "defaulted " << result.defaulted_count() << " of " << result.bank_count
              << " (fraction " << format_number(default_fraction(result)) << ")\n";
    for (std::size_t day = 1; day < result.default_histogram.size(); ++day) {
        if (result.default_histogram[day] > 0) {
            std::cout << "  day " << day << ": " << result.default_histogram[day] << '\n';
        }
    }
    std::cout << "trace written to " << path.string() << '\n';
    return 0;
}

int report_failures(const SweepResult& sweep) {
    for (const std::string& f : sweep.failures) {
        std::cerr << "failed realization: " << f << '\n';
    }
    for (const SweepPoint& p : sweep.points) {
        if (p.n_realizations == 0) {
            return kExitModel;
        }
    }
    return 0;
}

int cmd_sweep(Options& opt) {
    const SystemState initial = prepare(opt);
    const auto grid = grid_of(opt);
    const SweepResult sweep = run_sweep(initial, grid, opt.config, execution_of(opt));
    fs::create_directories(opt.out);
    const fs::path path = fs::path(opt.out) / (curve_id(opt.config) + ".csv");
    SimConfig echoed = opt.config;
    echoed.sigma = 0.0;
    write_sweep_csv(sweep.points, fingerprint(echoed) + ";" + describe_source(opt), path);
    for (const SweepPoint& p : sweep.points) {
        std::cout << "sigma " << std::setw(6) << format_number(p.sigma) << "  mean "
                  << format_number(p.mean_default_fraction) << "  se "
                  << format_number(p.std_error) << '\n';
    }
    std::cout << "sweep written to " << path.string() << " in " << std::fixed
              << std::setprecision(2) << sweep.wall_seconds << " s\n";
    return report_failures(sweep);
}

int cmd_figures(Options& opt) {
    const SystemState initial = prepare(opt);
    const auto grid = grid_of(opt);
    const FigureSuiteOutput output =
        run_figure_suite(initial, grid, opt.config, opt.out, execution_of(opt));
    int status = 0;
    for (const SweepResult& sweep : output.sweeps) {
        status = std::max(status, report_failures(sweep));
    }
    for (const fs::path& f : output.files) {
        std::cout << f.string() << '\n';
    }
    return status;
}

int cmd_analytic(Options& opt) {
    const SystemState initial = prepare(opt);
    const auto grid = grid_of(opt);
    const AnalyticForm form = opt.printed ? AnalyticForm::printed : AnalyticForm::corrected;
    const auto rows = analytic_curves(initial, grid, opt.config.days, form);
    fs::create_directories(opt.out);
    const fs::path path =
        fs::path(opt.out) / (opt.printed ? "analytic-printed.csv" : "analytic.csv");
    write_analytic_csv(rows,
                       "closed form; days=" + std::to_string(opt.config.days) + ";" +
                           describe_source(opt),
                       path);
    std::cout << "analytic curves written to " << path.string() << '\n';
    return 0;
}

int cmd_gen_data(Options& opt) {
    SyntheticSpec spec;
    spec.bank_count = opt.bank_count;
    spec.seed = opt.data_seed;
    const auto banks = generate_synthetic(spec);
    fs::create_directories(opt.out);
    const fs::path path = fs::path(opt.out) / "banks.csv";
    write_banks_csv(banks, path);
    std::cout << banks.size() << " banks written to " << path.string() << " (top-5 share "
              << format_number(top5_asset_share(banks)) << ")\n";
    return 0;
}

int cmd_validate(Options& opt, bool realizations_given) {
    if (!realizations_given) {
        opt.config.realizations = 1000;
    }
    const SystemState initial = prepare(opt);
    const std::vector<double> sigmas = opt.grid.empty() ? std::vector<double>{0.5, 1, 2, 4, 8}
                                                        : parse_sigma_grid(opt.grid);
    bool all_pass = true;
    const std::pair<Baseline, const char*> baselines[] = {
        {Baseline::no_markets, "no markets"},
        {Baseline::securities_fixed_price, "bonds at fixed price"}};
    for (const auto& [baseline, name] : baselines) {
        for (const OracleRow& row :
             check_oracle(initial, sigmas, opt.config, baseline, execution_of(opt))) {
            all_pass = all_pass && row.pass;
            std::cout << (row.pass ? "PASS" : "FAIL") << "  " << name << "  sigma "
                      << format_number(row.sigma) << "  simulated "
                      << format_number(row.simulated) << " +- " << format_number(row.std_error)
                      << "  closed form " << format_number(row.analytic) << '\n';
        }
    }
    return all_pass ? 0 : kExitValidation;
}

void add_model_options(CLI::App& app, Options& opt) {
    app.add_option("--sigma", opt.config.sigma, "Shock amplitude relative to initial cash");
    app.add_option("--eta", opt.config.eta, "Price impact per bond unit");
    app.add_option("--days", opt.config.days, "Horizon T in days");
    app.add_option("--realizations", opt.config.realizations, "Monte Carlo realizations per point");
    app.add_option("--seed", opt.config.seed, "Base RNG seed");
    app.add_flag("!--no-interbank", opt.config.interbank, "Disable the interbank market");
    app.add_flag("!--no-securities", opt.config.securities_market, "Disable the bond market");
    app.add_flag("--trust,!--no-trust", opt.config.trust_effect,
                 "Cut lending to a fraction of surplus once any bank defaults");
    app.add_option("--trust-fraction", opt.config.trust_fraction,
                   "Share of surplus lent after trust breaks");
    // a config file hands the comma list over as separate values
    app.add_option("--ratios", opt.ratios, "reserve,liquidity[,leverage,car,large-exposure]")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--banks", opt.banks, "Banks CSV (default: built-in synthetic system)");
    app.add_option("--out", opt.out, "Output directory");
    app.add_option("--grid", opt.grid, "Sigma grid, start:stop:step or a comma list");
    app.add_flag("--serial", opt.serial, "Run realizations on one thread (reference path)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overnight interbank market simulator"};
    app.set_config("--config", "", "Read 'key = value' settings; flags override the file");
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    add_model_options(app, opt);

    auto* simulate = app.add_subcommand("simulate", "Run one realization and write trace.csv");
    simulate->add_option("--realization", opt.realization, "Realization index (RNG sub-stream)");
    auto* sweep = app.add_subcommand("sweep", "Sweep sigma and write a sweep CSV");
    auto* figures = app.add_subcommand("figures", "Run every ablation curve and write a manifest");
    auto* analytic = app.add_subcommand("analytic", "Write the closed-form default curves");
    analytic->add_flag("--printed", opt.printed, "Use the uncorrected 1 - q^T compounding");
    auto* gen_data = app.add_subcommand("gen-data", "Write a synthetic banks CSV");
    gen_data->add_option("--count", opt.bank_count, "Number of banks");
    gen_data->add_option("--data-seed", opt.data_seed, "Generator seed");
    auto* validate_cmd =
        app.add_subcommand("validate", "Check Monte Carlo against the closed forms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*simulate) return cmd_simulate(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*figures) return cmd_figures(opt);
        if (*analytic) return cmd_analytic(opt);
        if (*gen_data) return cmd_gen_data(opt);
        if (*validate_cmd) return cmd_validate(opt, app.count("--realizations") > 0);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const PriceCollapse& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return 0;
}
