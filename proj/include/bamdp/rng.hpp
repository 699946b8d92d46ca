#pragma once

#include "bamdp/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace bamdp {

/// Seeded random source with hand-rolled draws on top of std::mt19937_64.
/// The standard distributions are implementation-defined, so generators
/// built here stay bit-reproducible across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 bits of randomness.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n).
    Index uniform_index(Index n) {
        auto k = static_cast<Index>(uniform01() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    /// Uniform sample from the (n-1)-simplex (flat Dirichlet) via
    /// normalized exponentials.
    Vector simplex_point(Index n) {
        Vector x(n);
        for (Index i = 0; i < n; ++i) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            x(i) = -std::log(u);
        }
        return x / x.sum();
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace bamdp
