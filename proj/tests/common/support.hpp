#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing_support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("pricecast_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::permissions(path_, std::filesystem::perms::owner_all, ec);
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    std::filesystem::path write(const std::string& name, const std::string& content) const {
        std::ofstream(path_ / name, std::ios::binary) << content;
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = z(rng);
    return out;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto steps = white_noise(n, seed);
    for (std::size_t t = 1; t < n; ++t) steps[t] += steps[t - 1];
    return steps;
}

/// x_t = c + sum phi_i x_{t-i} + a_t - sum theta_j a_{t-j}, after a burn-in.
inline std::vector<double> simulate_arma(std::size_t n, const std::vector<double>& phi,
                                         const std::vector<double>& theta, double c, std::uint64_t seed,
                                         double sd = 1.0) {
    const std::size_t burn = 500;
    const auto a = white_noise(n + burn, seed, sd);
    std::vector<double> x(n + burn, 0.0);
    for (std::size_t t = 0; t < n + burn; ++t) {
        double v = c + a[t];
        for (std::size_t i = 0; i < phi.size(); ++i) {
            if (t >= i + 1) v += phi[i] * x[t - i - 1];
        }
        for (std::size_t j = 0; j < theta.size(); ++j) {
            if (t >= j + 1) v -= theta[j] * a[t - j - 1];
        }
        x[t] = v;
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()};
}

}  // namespace testing_support
