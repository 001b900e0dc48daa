#pragma once

// Seeded random instances. Only std::mt19937_64 output is consumed directly, so the
// bytes produced for a seed do not depend on the standard library.

#include "m2sat/instance.hpp"

#include <cstdint>
#include <random>

namespace m2sat {

struct GenOptions {
    std::size_t n = 3;
    std::size_t max_pieces = 3;
    std::size_t max_constraints = 0;  // 0 means 2n
    long magnitude = 4;               // ranges and breakpoints lie in [-magnitude, magnitude]
};

/// Uniform integer in [lo, hi] by rejection sampling.
long draw(std::mt19937_64& rng, long lo, long hi);
/// Rational in [lo, hi] with denominator at most max_den.
Rational draw_rational(std::mt19937_64& rng, long lo, long hi, long max_den);

/// FracLin from rational coefficients, scaled to integers.
FracLin fraclin_from_rationals(const Rational& a, const Rational& b, const Rational& c, const Rational& d);

/// Random PFL with exactly `pieces` pieces: increasing values at sorted rational
/// breakpoints joined by fractional-linear arcs, affine at both ends.
PFL random_pfl(std::mt19937_64& rng, std::size_t pieces, long magnitude = 4);

Instance generate_instance(std::uint64_t seed, const GenOptions& opts);

}  // namespace m2sat
