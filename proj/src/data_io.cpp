#include "ibsim/data_io.hpp"

#include "ibsim/stochastics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

namespace ibsim {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

std::string where(std::size_t line_no) {
    return "line " + std::to_string(line_no);
}

double parse_double(std::string_view text, std::size_t line_no, std::string_view column) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty() ||
        !std::isfinite(value)) {
        throw DataError(where(line_no) + ": column '" + std::string(column) +
                        "' is not a number: '" + std::string(text) + "'");
    }
    return value;
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line_no, std::string_view column) {
    Int value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw DataError(where(line_no) + ": column '" + std::string(column) +
                        "' is not an integer: '" + std::string(text) + "'");
    }
    return value;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("error while writing " + path.string());
    }
}

std::string shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double round_12(double value) {
    const std::string text = format_number(value);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = strip_cr(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            fn(line, line_no, true);
            continue;
        }
        fn(line, line_no, false);
    }
    if (!header_seen) {
        throw DataError("missing header row");
    }
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::vector<Bank> parse_banks(std::istream& in, double price0) {
    std::vector<Bank> banks;
    std::set<std::uint32_t> seen;
    for_each_data_line(in, [&](std::string_view line, std::size_t line_no, bool header) {
        if (header) {
            if (line != kBanksHeader) {
                throw DataError(where(line_no) + ": expected header '" +
                                std::string(kBanksHeader) + "'");
            }
            return;
        }
        const auto fields = split_commas(line);
        if (fields.size() != 6) {
            throw DataError(where(line_no) + ": expected 6 columns, found " +
                            std::to_string(fields.size()));
        }
        Bank bank;
        bank.id.value = parse_int<std::uint32_t>(fields[0], line_no, "id");
        bank.name = std::string(fields[1]);
        bank.loans = parse_double(fields[2], line_no, "loans");
        bank.cash = parse_double(fields[3], line_no, "cash");
        bank.securities = parse_double(fields[4], line_no, "securities_units");
        bank.deposits = parse_double(fields[5], line_no, "deposits");
        const std::pair<double, const char*> non_negative[] = {{bank.loans, "loans"},
                                                               {bank.cash, "cash"},
                                                               {bank.securities, "securities_units"},
                                                               {bank.deposits, "deposits"}};
        for (const auto& [value, column] : non_negative) {
            if (value < 0.0) {
                throw DataError(where(line_no) + ": column '" + column + "' is negative");
            }
        }
        if (!(bank.deposits > 0.0)) {
            throw DataError(where(line_no) + ": deposits must be positive");
        }
        if (!(bank.loans + bank.cash + bank.securities * price0 > bank.deposits)) {
            throw DataError(where(line_no) + ": bank " + std::to_string(bank.id.value) +
                            " has non-positive equity (deposits exceed assets)");
        }
        if (!seen.insert(bank.id.value).second) {
            throw DataError(where(line_no) + ": duplicate bank id " +
                            std::to_string(bank.id.value));
        }
        bank.initial_cash = bank.cash;
        banks.push_back(std::move(bank));
    });
    return banks;
}

std::vector<Bank> load_banks(const std::filesystem::path& path, double price0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    try {
        return parse_banks(in, price0);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_banks_csv(const std::vector<Bank>& banks, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << kBanksHeader << '\n';
    for (const Bank& b : banks) {
        out << b.id.value << ',' << b.name << ',' << shortest(b.loans) << ',' << shortest(b.cash)
            << ',' << shortest(b.securities) << ',' << shortest(b.deposits) << '\n';
    }
    finish(out, path);
}

double top5_asset_share(const std::vector<Bank>& banks, double price0) {
    std::vector<double> sizes;
    sizes.reserve(banks.size());
    for (const Bank& b : banks) {
        sizes.push_back(total_assets(b, price0));
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
    const auto top = std::min<std::size_t>(5, sizes.size());
    const double head = std::accumulate(sizes.begin(), sizes.begin() + top, 0.0);
    return total > 0.0 ? head / total : 0.0;
}

namespace {

void check_range(const ShareRange& r, const char* what) {
    if (!(r.lo >= 0.0 && r.lo <= r.hi && r.hi <= 1.0)) {
        throw DataError(std::string("synthetic spec: invalid ") + what + " range");
    }
}

double top5_share_of(const std::vector<double>& sorted_desc) {
    const double total = std::accumulate(sorted_desc.begin(), sorted_desc.end(), 0.0);
    const auto top = std::min<std::size_t>(5, sorted_desc.size());
    return std::accumulate(sorted_desc.begin(), sorted_desc.begin() + top, 0.0) / total;
}

std::vector<double> powered(const std::vector<double>& base, double exponent) {
    std::vector<double> out(base.size());
    std::transform(base.begin(), base.end(), out.begin(),
                   [&](double s) { return std::pow(s, exponent); });
    return out;
}

}  // namespace

std::vector<Bank> generate_synthetic(const SyntheticSpec& spec) {
    if (spec.bank_count < 1) {
        throw DataError("synthetic spec: bank count must be >= 1");
    }
    if (!(spec.size_log_sd >= 0.0) || !(spec.total_securities > 0.0)) {
        throw DataError("synthetic spec: size spread must be >= 0 and total securities > 0");
    }
    check_range(spec.cash_share, "cash share");
    check_range(spec.securities_share, "securities share");
    check_range(spec.equity_share, "equity share");
    check_range(spec.top5_share, "top-5 share");
    if (spec.cash_share.lo <= 0.0 || spec.securities_share.lo <= 0.0 ||
        spec.equity_share.lo <= 0.0) {
        throw DataError("synthetic spec: cash, securities and equity shares must be positive");
    }
    // Loans must stay positive and the liquidity floor (cash + bonds) /
    // deposits below 1.
    if (spec.cash_share.hi + spec.securities_share.hi + spec.equity_share.hi >= 1.0) {
        throw DataError("synthetic spec: cash, securities and equity shares sum to 1 or more");
    }
    const auto n = static_cast<std::size_t>(spec.bank_count);
    if (n > 5 && 5.0 / static_cast<double>(n) > spec.top5_share.hi) {
        throw DataError("synthetic spec: top-5 share band is unreachable for this bank count");
    }

    RngStream rng(spec.seed, 0);
    std::vector<double> sizes(n);
    for (double& s : sizes) {
        s = std::exp(spec.size_log_mean + spec.size_log_sd * rng.next_normal());
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());

    // Steer concentration into the band by raising sizes to a power; the
    // top-5 share is increasing in the exponent.
    if (n > 5) {
        const double share = top5_share_of(sizes);
        if (share < spec.top5_share.lo || share > spec.top5_share.hi) {
            const double target = 0.5 * (spec.top5_share.lo + spec.top5_share.hi);
            double lo = 0.0;
            double hi = 1.0;
            while (top5_share_of(powered(sizes, hi)) < target && hi < 64.0) {
                hi *= 2.0;
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (top5_share_of(powered(sizes, mid)) < target ? lo : hi) = mid;
            }
            sizes = powered(sizes, 0.5 * (lo + hi));
        }
    }

    const auto draw = [&](const ShareRange& r) {
        return r.lo + (r.hi - r.lo) * rng.next_uniform();
    };
    struct Shares {
        double cash, securities, equity;
    };
    std::vector<Shares> shares(n);
    double raw_securities = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        shares[i] = {draw(spec.cash_share), draw(spec.securities_share), draw(spec.equity_share)};
        raw_securities += sizes[i] * shares[i].securities;
    }
    const double scale = spec.total_securities / raw_securities;

    std::vector<Bank> banks(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double assets = sizes[i] * scale;
        Bank& b = banks[i];
        b.id.value = static_cast<std::uint32_t>(i + 1);
        b.name = "Bank" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1);
        b.cash = round_12(assets * shares[i].cash);
        b.securities = round_12(assets * shares[i].securities);
        b.loans = round_12(assets * (1.0 - shares[i].cash - shares[i].securities));
        b.deposits = round_12(assets * (1.0 - shares[i].equity));
        b.initial_cash = b.cash;
    }
    return banks;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& header_comment,
                     const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "# " << header_comment << '\n' << kSweepHeader << '\n';
    for (const SweepPoint& p : points) {
        out << format_number(p.sigma) << ',' << p.config_id << ','
            << format_number(p.mean_default_fraction) << ',' << format_number(p.std_error) << ','
            << p.n_realizations << '\n';
    }
    finish(out, path);
}

void write_trace_csv(const std::vector<DayReport>& days, const std::string& header_comment,
                     const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "# " << header_comment << '\n' << kTraceHeader << '\n';
    for (const DayReport& d : days) {
        out << d.day << ',' << d.defaults_cum << ',' << format_number(d.loan_volume) << ','
            << format_number(d.bond_price) << ',' << format_number(d.total_cash) << ','
            << (d.trust_broken ? 1 : 0) << '\n';
    }
    finish(out, path);
}

void write_analytic_csv(const std::vector<AnalyticRow>& rows, const std::string& header_comment,
                        const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "# " << header_comment << '\n' << kAnalyticHeader << '\n';
    for (const AnalyticRow& r : rows) {
        out << format_number(r.sigma) << ',' << r.curve << ',' << format_number(r.default_fraction)
            << '\n';
    }
    finish(out, path);
}

std::vector<SweepPoint> read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<SweepPoint> points;
    for_each_data_line(in, [&](std::string_view line, std::size_t line_no, bool header) {
        if (header) {
            if (line != kSweepHeader) {
                throw DataError(where(line_no) + ": unexpected sweep header");
            }
            return;
        }
        const auto f = split_commas(line);
        if (f.size() != 5) {
            throw DataError(where(line_no) + ": expected 5 columns");
        }
        SweepPoint p;
        p.sigma = parse_double(f[0], line_no, "sigma");
        p.config_id = std::string(f[1]);
        p.mean_default_fraction = parse_double(f[2], line_no, "mean_default_fraction");
        p.std_error = parse_double(f[3], line_no, "std_error");
        p.n_realizations = parse_int<int>(f[4], line_no, "n_realizations");
        points.push_back(std::move(p));
    });
    return points;
}

std::vector<DayReport> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<DayReport> days;
    for_each_data_line(in, [&](std::string_view line, std::size_t line_no, bool header) {
        if (header) {
            if (line != kTraceHeader) {
                throw DataError(where(line_no) + ": unexpected trace header");
            }
            return;
        }
        const auto f = split_commas(line);
        if (f.size() != 6) {
            throw DataError(where(line_no) + ": expected 6 columns");
        }
        DayReport d;
        d.day = parse_int<int>(f[0], line_no, "day");
        d.defaults_cum = parse_int<int>(f[1], line_no, "defaults_cum");
        d.loan_volume = parse_double(f[2], line_no, "loan_volume");
        d.bond_price = parse_double(f[3], line_no, "bond_price");
        d.total_cash = parse_double(f[4], line_no, "total_cash");
        d.trust_broken = parse_int<int>(f[5], line_no, "trust_broken") != 0;
        days.push_back(d);
    });
    return days;
}

}  // namespace ibsim
