#include "m2sat/fixtures.hpp"

#include <optional>

namespace m2sat {

PFL restrict_extend(const FracLin& h, const Rational& lo, const Rational& hi, const Rational& vlo,
                    const Rational& vhi, const Rational& anchor) {
    if (!h.increasing()) throw ValidationError("restrict_extend: decreasing map");
    Rational a = lo, b = hi;
    if (auto p = h.pole()) {
        if (*p == anchor) throw ValidationError("restrict_extend: anchor at pole");
        if (*p < anchor && a <= *p) a = *p;
        if (*p > anchor && b >= *p) b = *p;
    }
    // On the branch h is increasing, so the preimage of [vlo, vhi] is an interval.
    FracLin inv = fl_invert(h);
    auto clip = [&](const Rational& v, Rational& end, bool lower) {
        std::optional<Rational> p = h.pole();
        Rational u;
        if (inv.pole() && *inv.pole() == v) return;  // h never takes v
        u = inv.apply(v);
        bool same_branch = !p || ((u < *p) == (anchor < *p));
        if (!same_branch) return;
        if (lower ? u > end : u < end) end = u;
    };
    clip(vlo, a, true);
    clip(vhi, b, false);
    auto p = h.pole();
    if (!(a < b) || (p && (*p == a || *p == b))) throw ValidationError("restrict_extend: empty domain");
    return pfl_clamp_extend(h, a, b);
}

namespace {

Range closed(long lo, long hi) { return {Surd(lo), Surd(hi)}; }

}  // namespace

Instance sqrt2_pair_instance() {
    Instance inst;
    inst.names = {"x"};
    inst.ranges = {closed(0, 2)};
    Literal x(0, false);
    // (x+2)/(x+1) at x = -u is (u-2)/(u-1); (x-2)/(-x+1) at x = -u is (u+2)/(-u-1).
    PFL f1 = restrict_extend(FracLin(1, -2, 1, -1), -2, 0, 0, 2, -1);
    PFL f2 = restrict_extend(FracLin(-1, -2, 1, 1), -2, 0, 0, 2, Rational(-3, 2));
    inst.constraints = {{x, -x, f1}, {x, -x, f2}};
    return inst;
}

Instance three_guard_instance() {
    Instance inst;
    inst.names = {"x", "y", "z"};
    inst.ranges = {closed(0, 2), closed(0, 2), closed(0, 2)};
    Literal x(0, false), y(1, false), z(2, false);
    PFL h1 = pfl_clamp_extend(FracLin(4, 2, 1, 4), 0, 2);
    PFL h2 = pfl_clamp_extend(FracLin(4, -2, -1, 4), 0, 2);
    inst.constraints = {{x, z, PFL::identity()}, {z, y, PFL::identity()}, {y, x, h1}, {y, x, h2}};
    return inst;
}

Instance shifted_range_instance() {
    Instance inst;
    inst.names = {"x", "y"};
    inst.ranges = {closed(1, 2), closed(0, 1)};
    inst.constraints = {{Literal(0, false), Literal(1, false), pfl_affine(1, -5)}};
    return inst;
}

}  // namespace m2sat
