#include "ibsim/sweep.hpp"

#include "ibsim/data_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

namespace ibsim {

namespace {

struct Outcome {
    double fraction = 0.0;
    bool failed = false;
    std::string error;
};

Outcome run_one(const SystemState& initial, const SimConfig& config, std::uint64_t realization) {
    Outcome out;
    try {
        out.fraction = default_fraction(run_simulation(initial, config, realization));
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

double parse_number(std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("invalid sigma value '" + s + "'");
    }
    if (used != s.size()) {
        throw ConfigError("invalid sigma value '" + s + "'");
    }
    return value;
}

}  // namespace

SweepResult run_sweep(const SystemState& initial, std::span<const double> sigmas,
                      const SimConfig& config_template, Execution execution) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n_sigma = sigmas.size();
    const auto n_real = static_cast<std::size_t>(config_template.realizations);
    const std::size_t n_tasks = n_sigma * n_real;

    std::vector<SimConfig> configs(n_sigma, config_template);
    for (std::size_t k = 0; k < n_sigma; ++k) {
        configs[k].sigma = sigmas[k];
    }

    std::vector<Outcome> outcomes(n_tasks);
    if (execution == Execution::parallel) {
        const auto tasks = static_cast<std::ptrdiff_t>(n_tasks);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t t = 0; t < tasks; ++t) {
            const auto task = static_cast<std::size_t>(t);
            outcomes[task] = run_one(initial, configs[task / n_real], task % n_real);
        }
    } else {
        for (std::size_t task = 0; task < n_tasks; ++task) {
            outcomes[task] = run_one(initial, configs[task / n_real], task % n_real);
        }
    }

    SweepResult result;
    const std::string id = curve_id(config_template);
    std::vector<double> fractions;
    fractions.reserve(n_real);
    for (std::size_t k = 0; k < n_sigma; ++k) {
        fractions.clear();
        int failed = 0;
        for (std::size_t r = 0; r < n_real; ++r) {
            const Outcome& o = outcomes[k * n_real + r];
            if (o.failed) {
                ++failed;
                result.failures.push_back("sigma=" + format_number(sigmas[k]) +
                                          " realization=" + std::to_string(r) + ": " + o.error);
            } else {
                fractions.push_back(o.fraction);
            }
        }
        result.points.push_back(aggregate_sweep(sigmas[k], id, fractions, failed));
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<double> parse_sigma_grid(std::string_view text) {
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string_view::npos) {
            throw ConfigError("sigma grid must be start:stop:step");
        }
        const double start = parse_number(text.substr(0, a));
        const double stop = parse_number(text.substr(a + 1, b - a - 1));
        const double step = parse_number(text.substr(b + 1));
        if (!(step > 0.0) || stop < start) {
            throw ConfigError("sigma grid needs step > 0 and stop >= start");
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) {
            grid.push_back(start + static_cast<double>(i) * step);
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto end = comma == std::string_view::npos ? text.size() : comma;
            grid.push_back(parse_number(text.substr(start, end - start)));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    for (double s : grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw ConfigError("sigma values must be finite and >= 0");
        }
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<double> default_sigma_grid() {
    return parse_sigma_grid("0:8:0.25");
}

std::vector<CurveSpec> figure_curves(const SimConfig& base) {
    const auto make = [&](bool interbank, bool securities, double eta, bool trust,
                          RatioToggles ratios) {
        SimConfig c = base;
        c.interbank = interbank;
        c.securities_market = securities;
        c.eta = eta;
        c.trust_effect = trust;
        c.ratios = ratios;
        return c;
    };
    const RatioToggles two{};
    const RatioToggles all = RatioToggles::all();
    return {
        {"channels", "no-markets", make(false, false, 0.0, false, two)},
        {"channels", "eta0-no-interbank", make(false, true, 0.0, false, two)},
        {"channels", "eta0-interbank", make(true, true, 0.0, false, two)},
        {"channels", "eta1e-6-no-interbank", make(false, true, 1e-6, false, two)},
        {"channels", "eta1e-6-interbank", make(true, true, 1e-6, false, two)},
        {"trust", "eta0-no-trust", make(true, true, 0.0, false, two)},
        {"trust", "eta0-trust", make(true, true, 0.0, true, two)},
        {"trust", "eta1e-6-no-trust", make(true, true, 1e-6, false, two)},
        {"trust", "eta1e-6-trust", make(true, true, 1e-6, true, two)},
        {"ratios", "eta0-two-ratios", make(true, true, 0.0, true, two)},
        {"ratios", "eta0-all-ratios", make(true, true, 0.0, true, all)},
        {"ratios", "eta1e-6-two-ratios", make(true, true, 1e-6, true, two)},
        {"ratios", "eta1e-6-all-ratios", make(true, true, 1e-6, true, all)},
    };
}

std::vector<AnalyticRow> analytic_curves(const SystemState& initial,
                                         std::span<const double> sigmas, int days,
                                         AnalyticForm form) {
    const std::string suffix = form == AnalyticForm::printed ? "-printed" : "";
    std::vector<AnalyticRow> rows;
    for (double s : sigmas) {
        rows.push_back({s, "analytic-no-markets" + suffix, analytic_no_market_fraction(s, days, form)});
    }
    for (double s : sigmas) {
        rows.push_back({s, "analytic-securities" + suffix,
                        analytic_securities_fraction(initial.banks, initial.price, s, days, form)});
    }
    return rows;
}

FigureSuiteOutput run_figure_suite(const SystemState& initial, std::span<const double> sigmas,
                                   const SimConfig& base, const std::filesystem::path& out_dir,
                                   Execution execution) {
    std::filesystem::create_directories(out_dir);
    FigureSuiteOutput output;
    std::map<std::string, std::filesystem::path> written;
    std::vector<std::pair<const CurveSpec*, std::string>> manifest;
    const auto curves = figure_curves(base);
    for (const CurveSpec& curve : curves) {
        const std::string id = curve_id(curve.config);
        if (!written.count(id)) {
            SweepResult sweep = run_sweep(initial, sigmas, curve.config, execution);
            const auto path = out_dir / (id + ".csv");
            SimConfig echoed = curve.config;
            echoed.sigma = 0.0;
            write_sweep_csv(sweep.points, fingerprint(echoed), path);
            written.emplace(id, path);
            output.files.push_back(path);
            output.sweeps.push_back(std::move(sweep));
        }
        manifest.emplace_back(&curve, written.at(id).filename().string());
    }

    const auto rows = analytic_curves(initial, sigmas, base.days);
    const std::string comment = "closed form; days=" + std::to_string(base.days);
    std::vector<AnalyticRow> no_markets(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(sigmas.size()));
    std::vector<AnalyticRow> securities(rows.begin() + static_cast<std::ptrdiff_t>(sigmas.size()), rows.end());
    const auto no_markets_path = out_dir / "analytic-no-markets.csv";
    const auto securities_path = out_dir / "analytic-securities.csv";
    write_analytic_csv(no_markets, comment, no_markets_path);
    write_analytic_csv(securities, comment, securities_path);
    output.files.push_back(no_markets_path);
    output.files.push_back(securities_path);

    const auto manifest_path = out_dir / "manifest.csv";
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + manifest_path.string());
    }
    out << "group,curve,file\n";
    out << "channels,analytic-no-markets," << no_markets_path.filename().string() << '\n';
    out << "channels,analytic-securities," << securities_path.filename().string() << '\n';
    for (const auto& [curve, file] : manifest) {
        out << curve->group << ',' << curve->label << ',' << file << '\n';
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("error while writing " + manifest_path.string());
    }
    output.files.push_back(manifest_path);
    return output;
}

std::vector<OracleRow> check_oracle(const SystemState& initial, std::span<const double> sigmas,
                                    const SimConfig& config_template, Baseline baseline,
                                    Execution execution) {
    SimConfig config = config_template;
    config.interbank = false;
    config.securities_market = baseline == Baseline::securities_fixed_price;
    config.eta = 0.0;
    config.trust_effect = false;
    config.ratios = RatioToggles{};
    const SweepResult sweep = run_sweep(initial, sigmas, config, execution);
    std::vector<OracleRow> rows;
    const double n_banks = static_cast<double>(initial.banks.size());
    for (const SweepPoint& p : sweep.points) {
        OracleRow row;
        row.sigma = p.sigma;
        row.simulated = p.mean_default_fraction;
        row.std_error = p.std_error;
        double variance = 0.0;
        if (baseline == Baseline::no_markets) {
            const double prob = analytic_no_market_fraction(p.sigma, config.days);
            row.analytic = prob;
            variance = prob * (1.0 - prob) / n_banks;
        } else {
            row.analytic = analytic_securities_fraction(initial.banks, initial.price, p.sigma,
                                                        config.days);
            for (const Bank& bank : initial.banks) {
                const double prob = compounded_default_probability(
                    1.0 + initial.price * bank.securities / bank.initial_cash, p.sigma,
                    config.days);
                variance += prob * (1.0 - prob);
            }
            variance /= n_banks * n_banks;
        }
        row.null_std_error =
            p.n_realizations > 0 ? std::sqrt(variance / static_cast<double>(p.n_realizations))
                                 : 0.0;
        row.pass = p.n_failed == 0 &&
                   std::fabs(row.simulated - row.analytic) <=
                       4.0 * std::max(row.std_error, row.null_std_error) + kOracleAbsoluteSlack;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ibsim
