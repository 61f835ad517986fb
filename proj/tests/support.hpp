#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace testing {

inline bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
    if (a == b) return true;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

inline Catch::Matchers::WithinRelMatcher Rel(double target, double rel) {
    return Catch::Matchers::WithinRel(target, rel);
}

inline Catch::Matchers::WithinAbsMatcher Abs(double target, double tol) {
    return Catch::Matchers::WithinAbs(target, tol);
}

// Fixed-seed engine so property tests are reproducible.
inline std::mt19937_64& rng() {
    static std::mt19937_64 engine(20240611);
    return engine;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace testing
