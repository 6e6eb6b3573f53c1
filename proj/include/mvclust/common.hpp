#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>

namespace mvc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMatrix = Eigen::SparseMatrix<double>;

inline void warn(const std::string& msg) {
    std::cerr << "[mvclust] warning: " << msg << "\n";
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derived seed for an independent substream (stage of a pipeline,
/// restart of a solver, ...). Substream `i` of `base` is
/// splitmix64(base + i * 0x9E3779B97F4A7C15).
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base + stream * 0x9E3779B97F4A7C15ULL);
}

/// Seeded generator with explicit draw functions. All randomness in the
/// library goes through this type so that results are reproducible
/// bit-for-bit for a given seed, independent of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        const int i = static_cast<int>(uniform() * n);
        return i >= n ? n - 1 : i;
    }

    /// Standard normal via Box-Muller (no cached spare).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

inline void require_finite(const Matrix& x, const std::string& what) {
    if (!x.allFinite())
        throw std::invalid_argument(what + ": non-finite values");
}

}  // namespace mvc
