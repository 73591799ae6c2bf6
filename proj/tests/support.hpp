#pragma once

// Shared helpers for the unit tests. Random inputs use std::mt19937_64 so the
// test oracles do not share a generator with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "rhls/cayley.hpp"
#include "rhls/heisenberg.hpp"

namespace rhls::test {

inline HPoint random_hpoint(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal;
    HPoint::ZVector z(n);
    for (int k = 0; k < n; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        z(k) = {scale * re, scale * im};
    }
    return HPoint(z, scale * scale * normal(rng));
}

inline SPoint random_spoint(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        SPoint::Vector xi(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double re = normal(rng);
            const double im = normal(rng);
            xi(k) = {re, im};
        }
        xi /= xi.norm();
        if (std::abs(xi(n) + 1.0) > kSouthPoleCap) return SPoint(xi);
    }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace rhls::test
