#pragma once

// Shared helpers for tests: random exact values and a high-precision float oracle.

#include "doctest.h"
#include "m2sat/exact.hpp"

#include <gmpxx.h>

#include <random>

namespace m2sat::testing {

constexpr unsigned kOraclePrecision = 512;

struct BigFloat : mpf_class {
    BigFloat() : mpf_class(0, kOraclePrecision) {}
    BigFloat(double v) : mpf_class(v, kOraclePrecision) {}  // NOLINT
    BigFloat(const mpf_class& v) : mpf_class(v, kOraclePrecision) {}  // NOLINT
    template <class T, class U>
    BigFloat(const __gmp_expr<T, U>& e) : mpf_class(e, kOraclePrecision) {}  // NOLINT
};

inline BigFloat to_big(const Integer& z) { return BigFloat(mpf_class(z, kOraclePrecision)); }

inline BigFloat to_big(const Rational& q) { return BigFloat(mpf_class(q, kOraclePrecision)); }

inline BigFloat to_big(const Surd& s) {
    mpf_class root(s.r(), kOraclePrecision);
    root = sqrt(root);
    mpf_class out(s.p(), kOraclePrecision);
    mpf_class q(s.q(), kOraclePrecision);
    out += q * root;
    return BigFloat(out);
}

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational random_rational(std::mt19937_64& rng, long num = 20, long den = 9) {
    return make_rational(uniform(rng, -num, num), uniform(rng, 1, den));
}

inline Surd random_surd(std::mt19937_64& rng) {
    static const long radicands[] = {0, 2, 3, 5, 6, 7, 10, 8, 12, 13, 50};
    long r = radicands[uniform(rng, 0, 10)];
    return Surd::make(random_rational(rng), random_rational(rng, 9, 5), r);
}

inline FracLin random_fraclin(std::mt19937_64& rng, long bound = 9) {
    while (true) {
        long a = uniform(rng, -bound, bound), b = uniform(rng, -bound, bound);
        long c = uniform(rng, -bound, bound), d = uniform(rng, -bound, bound);
        if (uniform(rng, 0, 3) == 0) c = 0;
        if (Integer(a) * d - Integer(b) * c > 0) return FracLin(a, b, c, d);
    }
}

}  // namespace m2sat::testing

namespace doctest {

template <>
struct StringMaker<m2sat::ExtSurd> {
    static String convert(const m2sat::ExtSurd& x) { return x.to_string().c_str(); }
};

template <>
struct StringMaker<m2sat::Surd> {
    static String convert(const m2sat::Surd& x) { return x.to_string().c_str(); }
};

}  // namespace doctest
