#pragma once

#include "multirec/numeric.hpp"

#include <random>
#include <string>

namespace multirec::test {

inline Rational R(const char* text) { return parse_rational(text); }

// Test-side randomness; the library has its own engine.
inline std::mt19937_64& rng() {
    static std::mt19937_64 engine(20240611);
    return engine;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

}  // namespace multirec::test
