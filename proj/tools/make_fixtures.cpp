// Generates the synthetic Yahoo-style CSV fixtures shipped under data/fixtures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace std::chrono;

struct Profile {
    std::string ticker;
    double base;
    double drift;   // per business day, fraction of base
    double cycle;   // amplitude, fraction of base
    double period;  // business days
    double ripple;
    double ripple_period;
    double noise;   // innovation sd, fraction of base
    double phi;
    std::uint64_t seed;
};

std::vector<year_month_day> business_days(year_month_day from, year_month_day to) {
    std::vector<year_month_day> out;
    for (sys_days d{from}; d <= sys_days{to}; d += days{1}) {
        const weekday w{d};
        if (w != Saturday && w != Sunday) out.emplace_back(d);
    }
    return out;
}

void write_prices(const std::filesystem::path& path, const Profile& p) {
    const auto dates = business_days(2010y / January / 4, 2018y / December / 31);
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const double ripple_phase = 2.0 * std::numbers::pi * unit(rng);

    std::ofstream out(path);
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    double noise = 0.0;
    double prev_close = std::nan("");
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const double x = static_cast<double>(t);
        noise = p.phi * noise + p.noise * p.base * normal(rng);
        const double close = p.base * (1.0 + p.drift * x + p.cycle * std::sin(2.0 * std::numbers::pi * x / p.period + phase) +
                                       p.ripple * std::sin(2.0 * std::numbers::pi * x / p.ripple_period + ripple_phase)) +
                             noise;
        const double open = std::isnan(prev_close) ? close : prev_close;
        const double spread = 0.002 * p.base;
        const double high = std::max(open, close) + spread;
        const double low = std::min(open, close) - spread;
        const auto volume = static_cast<long long>(1.0e6 * (1.0 + 0.3 * unit(rng)));
        char line[256];
        std::snprintf(line, sizeof line, "%04d-%02u-%02u,%.4f,%.4f,%.4f,%.4f,%.4f,%lld\n",
                      static_cast<int>(dates[t].year()), static_cast<unsigned>(dates[t].month()),
                      static_cast<unsigned>(dates[t].day()), open, high, low, close, close, volume);
        out << line;
        prev_close = close;
    }
}

void write_sine(const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "Date,High\n";
    sys_days d{2010y / January / 1};
    for (int t = 0; t < 2000; ++t, d += days{1}) {
        const year_month_day ymd{d};
        char line[64];
        std::snprintf(line, sizeof line, "%04d-%02u-%02u,%.10f\n", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      10.0 + std::sin(2.0 * std::numbers::pi * t / 50.0));
        out << line;
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data/fixtures";
    std::filesystem::create_directories(dir);
    const std::vector<Profile> profiles{
        {"SYNA", 120.0, 0.00002, 0.15, 230.0, 0.04, 63.0, 0.004, 0.5, 11},
        {"SYNB", 60.0, 0.00003, 0.12, 260.0, 0.05, 71.0, 0.005, 0.4, 22},
        {"SYNC", 300.0, 0.00001, 0.18, 200.0, 0.03, 57.0, 0.004, 0.6, 33},
        {"SYND", 90.0, 0.00002, 0.14, 280.0, 0.05, 83.0, 0.005, 0.5, 44},
    };
    for (const auto& p : profiles) write_prices(dir / (p.ticker + ".csv"), p);
    write_sine(dir / "sine.csv");
    return 0;
}
