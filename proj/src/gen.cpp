#include "m2sat/gen.hpp"

#include <algorithm>

namespace m2sat {

long draw(std::mt19937_64& rng, long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
}

Rational draw_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
    long den = draw(rng, 1, max_den);
    return make_rational(draw(rng, lo * den, hi * den), den);
}

FracLin fraclin_from_rationals(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    Integer l = 1;
    for (const Rational* q : {&a, &b, &c, &d}) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
    auto scaled = [&](const Rational& q) { return Integer(q.get_num() * (l / q.get_den())); };
    return FracLin(scaled(a), scaled(b), scaled(c), scaled(d));
}

namespace {

const Rational kLambdas[] = {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
const Rational kSlopes[] = {Rational(1, 2), Rational(1), Rational(2)};

Coeffs coeffs_of(const FracLin& f) { return {f.a(), f.b(), f.c(), f.d()}; }

}  // namespace

PFL random_pfl(std::mt19937_64& rng, std::size_t pieces, long magnitude) {
    if (pieces <= 1) {
        Rational slope = kSlopes[draw(rng, 0, 2)];
        return pfl_affine(slope, draw_rational(rng, -magnitude, magnitude, 2));
    }
    std::vector<Rational> xs, ys;
    while (xs.size() < pieces - 1) {
        Rational b = draw_rational(rng, -magnitude, magnitude, 2);
        if (std::find(xs.begin(), xs.end(), b) == xs.end()) xs.push_back(b);
    }
    std::sort(xs.begin(), xs.end());
    Rational y = draw_rational(rng, -magnitude, magnitude, 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys.push_back(y);
        y += draw_rational(rng, 1, 2 * magnitude, 2);
    }
    std::vector<Coeffs> ps;
    Rational s0 = kSlopes[draw(rng, 0, 2)];
    ps.push_back(coeffs_of(FracLin::affine(s0, ys.front() - s0 * xs.front())));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const Rational& lambda = kLambdas[draw(rng, 0, 4)];
        Rational dx = xs[i + 1] - xs[i], dy = ys[i + 1] - ys[i];
        FracLin inner = fraclin_from_rationals(1, -xs[i], 0, dx);
        FracLin phi = fraclin_from_rationals(lambda, 0, lambda - 1, 1);
        FracLin outer = fraclin_from_rationals(dy, ys[i], 0, 1);
        ps.push_back(coeffs_of(fl_compose(outer, fl_compose(phi, inner))));
    }
    Rational s1 = kSlopes[draw(rng, 0, 2)];
    ps.push_back(coeffs_of(FracLin::affine(s1, ys.back() - s1 * xs.back())));
    std::vector<ExtSurd> breaks(xs.begin(), xs.end());
    return pfl_validate(breaks, ps);
}

Instance generate_instance(std::uint64_t seed, const GenOptions& opts) {
    std::mt19937_64 rng(seed);
    Instance inst;
    for (std::size_t v = 0; v < opts.n; ++v) {
        inst.names.push_back("x" + std::to_string(v));
        Rational a = draw_rational(rng, -opts.magnitude, opts.magnitude, 2);
        Rational b = draw_rational(rng, -opts.magnitude, opts.magnitude, 2);
        if (b < a) std::swap(a, b);
        inst.ranges.push_back({Surd(a), Surd(b)});
    }
    std::size_t max_c = opts.max_constraints ? opts.max_constraints : 2 * opts.n;
    auto count = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_c)));
    const long last = static_cast<long>(opts.n) - 1;
    for (std::size_t i = 0; i < count; ++i) {
        Literal lesser(static_cast<std::size_t>(draw(rng, 0, last)), draw(rng, 0, 1) == 1);
        Literal greater(static_cast<std::size_t>(draw(rng, 0, last)), draw(rng, 0, 1) == 1);
        auto pieces = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(opts.max_pieces)));
        inst.constraints.push_back({lesser, greater, random_pfl(rng, pieces, opts.magnitude)});
    }
    return inst;
}

}  // namespace m2sat
