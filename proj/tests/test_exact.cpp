#include "doctest.h"
#include "m2sat/exact.hpp"
#include "support.hpp"

#include <random>

using namespace m2sat;
using namespace m2sat::testing;

TEST_CASE("surd normalization") {
    Surd a = Surd::make(0, 1, 8);
    CHECK(a.p() == 0);
    CHECK(a.q() == 2);
    CHECK(a.r() == 2);
    Surd b = Surd::make(3, 0, 7);
    CHECK(b.is_rational());
    CHECK(b.r() == 0);
    Surd c = Surd::make(1, 2, 9);
    CHECK(c.is_rational());
    CHECK(c.p() == 7);
    Surd d = Surd::make(0, 5, 0);
    CHECK(d.is_rational());
    CHECK(d.p() == 0);
    // a large square factor beyond trial division keeps the value
    Integer big = Integer(1000003) * 1000003 * 3;
    Surd e = Surd::make(0, 1, big);
    CHECK(e == Surd::make(0, 1000003, 3));
}

TEST_CASE("surd comparison examples") {
    CHECK(surd_cmp(Surd::make(1, 1, 2), Surd::make(0, 1, 5)) > 0);
    CHECK(surd_cmp(Surd::make(0, 1, 2), Surd::make(0, 1, 2)) == 0);
    CHECK(ExtSurd::neg_inf() < ExtSurd(Surd::make(-1000, 1, 2)));
    CHECK(ExtSurd(Surd::make(1000, 1, 2)) < ExtSurd::pos_inf());
    CHECK(Surd::make(0, 2, 2) == Surd::make(0, 1, 8));
    CHECK(Surd::make(0, 1, 2) < Surd(Rational(3, 2)));
    CHECK(Surd::make(0, -1, 2) < Surd(Rational(-7, 5)));
}

TEST_CASE("surd comparison agrees with high precision evaluation") {
    std::mt19937_64 rng(7);
    int checked = 0;
    std::vector<Surd> pool;
    for (int i = 0; i < 10000; ++i) {
        Surd s = random_surd(rng);
        Surd t = random_surd(rng);
        pool.push_back(s);
        BigFloat ds = to_big(s), dt = to_big(t);
        BigFloat diff = ds - dt;
        if (abs(diff) <= BigFloat(1e-6)) continue;
        ++checked;
        auto c = surd_cmp(s, t);
        REQUIRE(((diff < 0) == (c < 0)));
        REQUIRE((surd_cmp(t, s) > 0) == (c < 0));
    }
    CHECK(checked > 9000);
    for (std::size_t i = 0; i + 2 < 3000; i += 3) {
        const Surd &a = pool[i], &b = pool[i + 1], &c = pool[i + 2];
        if (a <= b && b <= c) CHECK(a <= c);
        if (a == b) CHECK(to_big(a) - to_big(b) == 0);
    }
}

TEST_CASE("rational bounds and betweenness") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        Surd s = random_surd(rng);
        auto [lo, hi] = rational_bounds(s, 40);
        CHECK(Surd(lo) <= s);
        CHECK(s <= Surd(hi));
        CHECK(hi - lo <= Rational(1, Integer(1) << 39));
        Surd t = random_surd(rng);
        if (s == t) continue;
        ExtSurd a = min_of(ExtSurd(s), ExtSurd(t)), b = max_of(ExtSurd(s), ExtSurd(t));
        Rational m = rational_between(a, b);
        CHECK(a < ExtSurd(m));
        CHECK(ExtSurd(m) < b);
    }
    CHECK(simplest_between(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
    CHECK(simplest_between(Rational(-1, 2), Rational(5, 2)) == 0);
    CHECK(ExtSurd(rational_between(ExtSurd::neg_inf(), ExtSurd(Surd::make(0, 1, 2)))) < ExtSurd(Surd::make(0, 1, 2)));
    CHECK(ExtSurd(rational_between(ExtSurd(Surd::make(0, 1, 2)), ExtSurd::pos_inf())) > ExtSurd(Surd::make(0, 1, 2)));
}

TEST_CASE("fractional linear normalization") {
    FracLin f(2, 4, 2, 2);
    CHECK(f == FracLin(1, 2, 1, 1));
    FracLin g(-1, -2, -1, -1);
    CHECK(g == FracLin(1, 2, 1, 1));
    CHECK_THROWS_AS(FracLin(1, 2, 2, 4), std::invalid_argument);
    CHECK_FALSE(FracLin(1, 2, 1, 1).increasing());
    CHECK(FracLin(1, -2, -1, 1).det() == -1);
    FracLin h(0, -1, 1, 0);
    CHECK(h.b() == 1);
    CHECK(h.c() == -1);
    CHECK(h.det() > 0);
}

TEST_CASE("fl_apply examples") {
    FracLin f(1, 2, 1, 1);
    Surd r2 = Surd::make(0, 1, 2);
    CHECK(fl_apply(f, r2) == r2);
    CHECK(fl_apply(f, r2).q() == 1);
    CHECK(fl_apply(FracLin::identity(), Surd::make(3, -2, 7)) == Surd::make(3, -2, 7));
    CHECK(fl_apply(f, ExtSurd::pos_inf()) == ExtSurd(1));
    CHECK(fl_apply(f, ExtSurd::neg_inf()) == ExtSurd(1));
    CHECK(fl_apply(FracLin(1, 1, 0, 1), ExtSurd::pos_inf()).is_pos_inf());
    CHECK(fl_apply(FracLin(1, 1, 0, 1), ExtSurd::neg_inf()).is_neg_inf());
    CHECK(fl_apply(FracLin(-1, 1, 0, 1), ExtSurd::neg_inf()).is_pos_inf());
    CHECK_THROWS_AS(fl_apply(f, ExtSurd(-1)), PoleError);
}

TEST_CASE("fl_apply conjugate denominator matches high precision") {
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        FracLin f = random_fraclin(rng);
        Surd x = random_surd(rng);
        if (f.pole() && Surd(*f.pole()) == x) continue;
        BigFloat den = to_big(f.c()) * to_big(x) + to_big(f.d());
        if (abs(den) < BigFloat(1e-9)) continue;
        BigFloat expect = (to_big(f.a()) * to_big(x) + to_big(f.b())) / den;
        Surd y = fl_apply(f, x);
        CHECK(abs(to_big(y) - expect) < BigFloat(1e-40) * (abs(expect) + 1));
        if (!x.is_rational() && !y.is_rational()) CHECK(y.r() == x.r());
        ++checked;
    }
    CHECK(checked > 1900);
}

TEST_CASE("fl_compose and fl_invert") {
    FracLin f(1, 2, 1, 1);
    CHECK(fl_compose(f, f) == FracLin(3, 4, 2, 3));
    CHECK(fl_compose(FracLin::identity(), f) == f);
    CHECK(fl_invert(f) == FracLin(1, -2, -1, 1));
    CHECK(fl_invert(FracLin::identity()).is_identity());
    CHECK(fl_compose(f, f).apply(0) == f.apply(f.apply(0)));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        FracLin g = random_fraclin(rng), h = random_fraclin(rng);
        FracLin gh = fl_compose(g, h);
        CHECK(gh.det() > 0);
        CHECK(gh.bits() <= g.bits() + h.bits() + 2);
        CHECK(fl_invert(fl_invert(g)) == g);
        CHECK(fl_compose(g, fl_invert(g)).is_identity());
        for (int k = 0; k < 5; ++k) {
            Surd x = random_surd(rng);
            if (g.pole() && x == Surd(*g.pole())) continue;
            try {
                Surd inner = fl_apply(h, x);
                Surd outer = fl_apply(g, inner);
                CHECK(fl_apply(gh, x) == outer);
                CHECK(fl_apply(fl_invert(g), fl_apply(g, x)) == x);
            } catch (const PoleError&) {
            }
        }
    }
}

TEST_CASE("fixed points and intersections") {
    FracLin f(1, 2, 1, 1);
    auto fp = fl_fixed_points(f);
    CHECK_FALSE(fp.all);
    REQUIRE(fp.roots.size() == 2);
    CHECK(fp.roots[0] == ExtSurd(Surd::make(0, -1, 2)));
    CHECK(fp.roots[1] == ExtSurd(Surd::make(0, 1, 2)));
    CHECK(fl_fixed_points(FracLin::identity()).all);
    CHECK(fl_fixed_points(FracLin(1, 1, 0, 1)).roots.empty());

    CHECK(fl_intersections(FracLin::identity(), FracLin(1, 1, 0, 1)).empty());
    auto in = fl_intersections(FracLin::identity(), f);
    REQUIRE(in.size() == 2);
    CHECK(in[1] == ExtSurd(Surd::make(0, 1, 2)));
    auto z = fl_intersections(FracLin(2, 0, 0, 1), FracLin::identity());
    REQUIRE(z.size() == 1);
    CHECK(z[0] == ExtSurd(0));

    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        FracLin g = random_fraclin(rng);
        for (const auto& root : fl_fixed_points(g).roots) CHECK(fl_apply(g, root) == root);
        FracLin h = random_fraclin(rng);
        if (g == h) continue;
        for (const auto& x : fl_intersections(g, h)) CHECK(fl_apply(g, x) == fl_apply(h, x));
    }
}
