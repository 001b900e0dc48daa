#include "doctest.h"
#include "m2sat/gallery.hpp"
#include "support.hpp"

#include <algorithm>

using namespace m2sat;
using namespace m2sat::testing;

namespace {

Polygon triangle() { return {{{0, 0}, {4, 0}, {0, 3}}}; }
Polygon square() { return {{{0, 0}, {2, 0}, {2, 2}, {0, 2}}}; }
// Three prongs of width 2 over a base of height 2.
Polygon comb() {
    return {{{0, 0}, {10, 0}, {10, 8}, {8, 8}, {8, 2}, {6, 2}, {6, 8}, {4, 8}, {4, 2}, {2, 2}, {2, 8}, {0, 8}}};
}

Point pt(long x, long y) { return {x, y}; }

bool on_segment(const Point& p, const Point& u, const Point& w) {
    if (cross(w - u, p - u) != 0) return false;
    return std::min(u.x, w.x) <= p.x && p.x <= std::max(u.x, w.x) && std::min(u.y, w.y) <= p.y &&
           p.y <= std::max(u.y, w.y);
}

// Closed point-in-polygon by crossing parity.
bool inside(const Polygon& poly, const Point& p) {
    bool in = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& u = poly.vertices[i];
        const Point& w = poly.vertices[(i + 1) % poly.size()];
        if (on_segment(p, u, w)) return true;
        if ((u.y > p.y) != (w.y > p.y)) {
            Rational xi = u.x + (p.y - u.y) * (w.x - u.x) / (w.y - u.y);
            if (p.x < xi) in = !in;
        }
    }
    return in;
}

// Exact test that segment p-q lies in the closed polygon: split it at every point
// where it meets the boundary and test the middle of each piece.
bool segment_inside(const Polygon& poly, const Point& p, const Point& q) {
    std::vector<Rational> ts{0, 1};
    Point d = q - p;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& u = poly.vertices[i];
        const Point& w = poly.vertices[(i + 1) % poly.size()];
        Point e = w - u;
        Rational den = cross(d, e);
        if (den != 0) {
            Rational t = cross(u - p, e) / den, s = cross(u - p, d) / den;
            if (t >= 0 && t <= 1 && s >= 0 && s <= 1) ts.push_back(t);
        }
        for (const Point& v : {u, w})
            if (on_segment(v, p, q) && d.x * d.x + d.y * d.y != 0)
                ts.push_back(((v - p).x * d.x + (v - p).y * d.y) / (d.x * d.x + d.y * d.y));
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        if (!inside(poly, p + Rational((ts[i] + ts[i + 1]) / 2) * d)) return false;
    return inside(poly, p) && inside(poly, q);
}

std::size_t count_kind(const json& meta, const std::string& kind) {
    return static_cast<std::size_t>(std::count_if(meta["constraints"].begin(), meta["constraints"].end(),
                                                   [&](const json& c) { return c["kind"] == kind; }));
}

}  // namespace

TEST_CASE("nook threshold") {
    Nook nk = nook_fixture();
    FracLin t = nook_threshold(nk);
    CHECK(t.apply(0) == Rational(1, 2));
    CHECK(t.apply(1) == Rational(6, 5));
    CHECK(t.apply(2) == Rational(5, 3));
    CHECK(t == FracLin(4, 2, 1, 4));
    // The threshold is where the sightline from the x-guard through Q and the one from
    // the y-guard through P reach the same point of l.
    auto hit = [&](const Point& from, const Point& through) {
        Point d = through - from, e = nk.l_line.a;
        return from + Rational(cross(nk.l_line.b - from, e) / cross(d, e)) * d;
    };
    for (long x = 0; x <= 2; ++x)
        CHECK(hit(nk.x_line.at(x), nk.Q) == hit(nk.y_line.at(t.apply(x)), nk.P));
}

TEST_CASE("visibility coefficients") {
    // Unit square: guard on the bottom edge, target the top edge, v at the origin.
    EdgeFrame bottom{pt(1, 0), pt(0, 0)}, top{pt(-1, 0), pt(1, 1)};
    Coeffs k = visibility_coeffs(bottom, top, pt(0, 0));
    CHECK(k.a == 0);
    CHECK(k.b == 0);
    CHECK(k.c == 0);
    CHECK(k.d > 0);

    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
        EdgeFrame g{{uniform(rng, -5, 5), uniform(rng, -5, 5)}, {uniform(rng, -5, 5), uniform(rng, -5, 5)}};
        EdgeFrame t{{uniform(rng, -5, 5), uniform(rng, -5, 5)}, {uniform(rng, -5, 5), uniform(rng, -5, 5)}};
        Point v{uniform(rng, -5, 5), uniform(rng, -5, 5)};
        Coeffs c = visibility_coeffs(g, t, v);
        std::optional<Rational> ratio;
        for (int s = 0; s < 5; ++s) {
            Rational x = random_rational(rng, 5, 4), y = random_rational(rng, 5, 4);
            Rational direct = cross(g.at(x) - v, t.at(y) - v);
            Rational formula = x * (Rational(c.c) * y + Rational(c.d)) - (Rational(c.a) * y + Rational(c.b));
            if (formula == 0) {
                CHECK(direct == 0);
                continue;
            }
            Rational r = direct / formula;
            CHECK(r > 0);
            if (ratio) CHECK(r == *ratio);
            ratio = r;
        }
    }
}

TEST_CASE("build_constraint agrees with the cross-product sign on the box") {
    std::mt19937_64 rng(5);
    std::size_t checked = 0, unsupported = 0;
    Literal x(0, false), y(1, false);
    for (int it = 0; it < 400; ++it) {
        Coeffs k{uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4), uniform(rng, -4, 4)};
        int sigma = uniform(rng, 0, 1) ? 1 : -1;
        auto interval = [&] {
            Rational a = random_rational(rng, 6, 3), b = random_rational(rng, 6, 3);
            if (uniform(rng, 0, 9) == 0) b = a;
            return Range{Surd(std::min(a, b)), Surd(std::max(a, b))};
        };
        Range xr = interval(), yr = interval();
        BuiltConstraint b;
        try {
            b = build_constraint(k, sigma, x, y, xr, yr);
        } catch (const GalleryError&) {
            ++unsupported;
            continue;
        }
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; j <= 6; ++j) {
                Rational xv = xr.lo.p() + (xr.hi.p() - xr.lo.p()) * Rational(i, 6);
                Rational yv = yr.lo.p() + (yr.hi.p() - yr.lo.p()) * Rational(j, 6);
                Rational lhs = xv * (Rational(k.c) * yv + Rational(k.d)) - (Rational(k.a) * yv + Rational(k.b));
                bool want = sigma * sgn(lhs) >= 0;
                bool got = in_range(b.x_range, Surd(xv)) && in_range(b.y_range, Surd(yv));
                for (const auto& c : b.constraints) {
                    auto val = [&](Literal l) { return ExtSurd(l.var() == 0 ? (l.negated() ? -xv : xv) : (l.negated() ? -yv : yv)); };
                    got = got && !(pfl_eval(c.f, val(c.greater)) < val(c.lesser));
                }
                INFO("k " << k.a << " " << k.b << " " << k.c << " " << k.d << " s " << sigma << " x " << xv << " in "
                          << xr.lo.p() << ".." << xr.hi.p() << " y " << yv << " in " << yr.lo.p() << ".." << yr.hi.p()
                          << " lhs " << lhs);
                CHECK(got == want);
                ++checked;
            }
    }
    MESSAGE(checked << " points checked, " << unsupported << " unsupported coefficient boxes");
    CHECK(checked > 10000);
}

TEST_CASE("polygon validation") {
    CHECK_NOTHROW(validate_polygon(comb()));
    Polygon cw = square();
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK_THROWS_AS(validate_polygon(cw), GalleryError);
    CHECK_THROWS_AS(validate_polygon({{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}), GalleryError);
    CHECK_THROWS_AS(validate_polygon({{{0, 0}, {1, 0}}}), GalleryError);
}

TEST_CASE("plan validation and JSON") {
    GuardPlan plan{{0}, {{0}, {0}, {0}}, {}};
    CHECK_NOTHROW(validate_plan(triangle(), plan));
    CHECK_THROWS_AS(validate_plan(triangle(), GuardPlan{{0}, {{0}, {0}}, {}}), GalleryError);
    CHECK_THROWS_AS(validate_plan(triangle(), GuardPlan{{0}, {{0}, {1}, {0}}, {}}), GalleryError);
    CHECK_THROWS_AS(validate_plan(triangle(), GuardPlan{{0}, {{0}, {}, {0}}, {}}), GalleryError);
    CHECK_THROWS_AS(validate_plan(triangle(), GuardPlan{{0}, {{0}, {0}, {0}}, {{Rational(1, 2), Rational(1, 4)}}}),
                    GalleryError);
    GuardPlan ranged{{0, 2}, {{0}, {1, 0}, {1}}, {{0, Rational(1, 3)}, {Rational(1, 2), 1}}};
    CHECK(plan_from_json(plan_to_json(ranged)) == ranged);
    CHECK(plan_from_json(plan_to_json(plan)) == plan);
    CHECK(polygon_from_json(polygon_to_json(comb())).vertices == comb().vertices);
}

TEST_CASE("convex polygons need one guard and no blocking constraints") {
    for (const Polygon& p : {triangle(), square()}) {
        GuardPlan plan{{0}, std::vector<std::vector<std::size_t>>(p.size(), {0}), {}};
        Reduction r = reduce(p, plan);
        CHECK(count_kind(r.metadata, "visibility") == 0);
        CHECK(solve(r.instance).sat);
        EnumerationResult e = enumerate_plans(p, 1, 1);
        CHECK(e.sat);
        CHECK(e.plans_tried == 1);
    }
}

TEST_CASE("comb") {
    SUBCASE("one guard is not enough within the caps") {
        EnumerationResult e = enumerate_plans(comb(), 1, 2);
        CHECK_FALSE(e.sat);
        CHECK(e.plans_tried == comb().size());
    }
    SUBCASE("three guards under the prongs") {
        GuardPlan plan{{0, 0, 0},
                       {{0}, {2}, {2}, {2}, {1}, {1}, {1}, {1}, {0}, {0}, {0}, {0}},
                       {{0, Rational(1, 5)}, {Rational(2, 5), Rational(3, 5)}, {Rational(4, 5), 1}}};
        Reduction r = reduce(comb(), plan);
        Verdict v = solve(r.instance);
        REQUIRE(v.sat);
        CHECK(verify_sat(r.instance, v.witness));
        // Every sightline from a guard to the ends of its intervals stays in the polygon.
        Polygon p = comb();
        for (std::size_t e = 0; e < p.size(); ++e) {
            EdgeFrame target = edge_frame(p, e);
            for (std::size_t g : plan.intervals[e]) {
                REQUIRE(v.witness[g].is_rational());
                Point gp = edge_frame(p, plan.guard_edges[g]).at(v.witness[g].p());
                for (const Rational& t : {Rational(0), Rational(1, 3), Rational(1)})
                    CHECK(segment_inside(p, gp, target.at(t)));
            }
        }
        // The same plan without the sub-segments puts all references at the middle of
        // the base, where the far prongs are judged from the wrong side.
        GuardPlan coarse = plan;
        coarse.guard_ranges.clear();
        CHECK_FALSE(solve(reduce(comb(), coarse).instance).sat);
    }
}
