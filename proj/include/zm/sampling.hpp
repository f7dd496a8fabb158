#pragma once

// Seeded sampling with a platform-independent bit recipe: mt19937_64 is fully
// specified by the standard, and the float conversions below avoid the
// implementation-defined std distributions.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "zm/types.hpp"

namespace zm {

class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal (Box-Muller, one value per call).
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    Vec uniform_vec(int n, double a, double b) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(a, b);
        return v;
    }

    Vec normal_vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    Spinor normal_spinor(int N) {
        Spinor s(N);
        for (int i = 0; i < N; ++i) {
            const double re = normal();
            s(i) = cplx(re, normal());
        }
        return s;
    }

    /// Random antisymmetric matrix with normal entries above the diagonal.
    Mat antisymmetric(int n) {
        Mat F = Mat::Zero(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                F(j, k) = normal();
                F(k, j) = -F(j, k);
            }
        return F;
    }

private:
    std::mt19937_64 gen_;
};

/// `count` points uniform in the cube [-half_width, half_width]^n.
inline std::vector<Vec> random_points(int n, std::size_t count, std::uint64_t seed,
                                      double half_width) {
    PortableRng rng(seed);
    std::vector<Vec> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.uniform_vec(n, -half_width, half_width));
    return pts;
}

}  // namespace zm
