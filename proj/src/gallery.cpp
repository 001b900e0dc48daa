#include "m2sat/gallery.hpp"

#include "m2sat/solver.hpp"

#include <algorithm>
#include <functional>

namespace m2sat {

Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
Point operator*(const Rational& s, const Point& p) { return {s * p.x, s * p.y}; }
Rational cross(const Point& p, const Point& q) { return p.x * q.y - p.y * q.x; }

namespace {

int sign(const Rational& q) { return sgn(q); }

int orient(const Point& a, const Point& b, const Point& c) { return sign(cross(b - a, c - a)); }

bool on_segment(const Point& p, const Point& a, const Point& b) {
    return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
}

Point line_intersection(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    Point r = p2 - p1, s = q2 - q1;
    Rational den = cross(r, s);
    if (den == 0) throw GalleryError("parallel lines in construction");
    Rational t = cross(q1 - p1, s) / den;
    return p1 + t * r;
}

Coeffs scaled(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    Integer l = 1;
    for (const Rational* q : {&a, &b, &c, &d}) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
    auto z = [&](const Rational& q) { return Integer(q * l); };
    return {z(a), z(b), z(c), z(d)};
}

FracLin fraclin(const Coeffs& k) { return FracLin(k.a, k.b, k.c, k.d); }

Rational rat(const Integer& num, const Integer& den) { return make_rational(num, den); }

// x <= x - 1: a loop that sends every value to -inf.
Constraint contradiction(Literal x) { return {x, x, pfl_affine(1, -1)}; }

}  // namespace

void validate_polygon(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) throw GalleryError("polygon needs at least 3 vertices");
    Rational area2 = 0;
    for (std::size_t i = 0; i < n; ++i) area2 += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
    if (area2 <= 0) throw GalleryError("polygon must be counterclockwise with positive area");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point &a = poly.vertices[i], &b = poly.vertices[(i + 1) % n];
            const Point &c = poly.vertices[j], &d = poly.vertices[(j + 1) % n];
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges share exactly one vertex and must not fold back.
                const Point& far = j == i + 1 ? d : c;
                const Point& shared = j == i + 1 ? b : a;
                const Point& other = j == i + 1 ? a : b;
                if (orient(other, shared, far) == 0 && on_segment(far, other, shared))
                    throw GalleryError("edges " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
                if (orient(other, shared, far) == 0 && on_segment(other, shared, far))
                    throw GalleryError("edges " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
                continue;
            }
            if (segments_touch(a, b, c, d))
                throw GalleryError("edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
    }
}

EdgeFrame edge_frame(const Polygon& poly, std::size_t e) {
    const Point& p = poly.vertices[e];
    const Point& q = poly.vertices[(e + 1) % poly.size()];
    return {q - p, p};
}

Coeffs visibility_coeffs(const EdgeFrame& guard, const EdgeFrame& target, const Point& v) {
    Point bv = guard.b - v, dv = target.b - v;
    Rational a = -cross(bv, target.a);
    Rational b = -cross(bv, dv);
    Rational c = cross(guard.a, target.a);
    Rational d = cross(guard.a, dv);
    return scaled(a, b, c, d);
}

BuiltConstraint build_constraint(const Coeffs& k0, int sigma, Literal x, Literal y, const Range& xr, const Range& yr) {
    Coeffs k = sigma > 0 ? k0 : Coeffs{-k0.a, -k0.b, -k0.c, -k0.d};
    BuiltConstraint out;
    out.x_range = xr;
    out.y_range = yr;
    // Now x (cy + d) >= a y + b on the box.
    auto denom_sign_on_range = [&]() -> int {
        Rational lo = rat(k.c, 1) * yr.lo.p() + rat(k.d, 1);
        Rational hi = rat(k.c, 1) * yr.hi.p() + rat(k.d, 1);
        if (lo > 0 && hi > 0) return 1;
        if (lo < 0 && hi < 0) return -1;
        return 0;
    };
    if (!yr.lo.is_rational() || !yr.hi.is_rational() || !xr.lo.is_rational() || !xr.hi.is_rational())
        throw GalleryError("sightline ranges must be rational");
    auto narrow_x = [&](int s, const Rational& threshold) {
        Rational lo = xr.lo.p(), hi = xr.hi.p();
        if (s > 0) lo = std::max(lo, threshold);
        if (s < 0) hi = std::min(hi, threshold);
        if (lo > hi) {
            out.contradiction = true;
            out.constraints.push_back(contradiction(x));
        } else {
            out.x_range = {lo, hi};
        }
        return out;
    };
    if (yr.lo == yr.hi) {
        // Pinned endpoint: x d0 >= n0.
        const Rational& y0 = yr.lo.p();
        Rational d0 = rat(k.c, 1) * y0 + rat(k.d, 1), n0 = rat(k.a, 1) * y0 + rat(k.b, 1);
        if (d0 != 0) return narrow_x(sgn(d0), n0 / d0);
        if (n0 > 0) {
            out.contradiction = true;
            out.constraints.push_back(contradiction(x));
        }
        return out;
    }
    Integer det = k.det();
    if (det == 0) {
        // Threshold independent of y: adjust the range of x.
        std::optional<Rational> threshold;
        int s = 0;
        if (k.c != 0) {
            s = denom_sign_on_range();
            if (s == 0) throw GalleryError("degenerate sightline with a sign change of cy+d on the y range");
            threshold = rat(k.a, k.c);
        } else if (k.d != 0) {
            s = sgn(k.d);
            threshold = rat(k.b, k.d);
        } else {
            // 0 >= a y + b: a condition on y alone.
            Rational lo = yr.lo.p(), hi = yr.hi.p();
            if (k.a > 0) hi = std::min(hi, rat(-k.b, k.a));
            if (k.a < 0) lo = std::max(lo, rat(-k.b, k.a));
            if (lo > hi || (k.a == 0 && k.b > 0)) {
                out.contradiction = true;
                out.constraints.push_back(contradiction(x));
            } else {
                out.y_range = Range{lo, hi};
            }
            return out;
        }
        return narrow_x(s, *threshold);
    }
    int s = denom_sign_on_range();
    if (s == 0) throw GalleryError("threshold has a pole on the y range");
    Rational lo = yr.lo.p(), hi = yr.hi.p();
    Coeffs r{k.a, k.b, k.c, k.d};
    if (s > 0) {
        // x >= r(y)
        if (det > 0) {
            // -x <= -r(-z) at z = -y
            FracLin f = fraclin(negate_output(negate_input(r)));
            out.constraints.push_back({-x, -y, pfl_clamp_extend(f, -hi, -lo)});
        } else {
            FracLin f = fraclin(negate_output(r));  // -x <= -r(y)
            out.constraints.push_back({-x, y, pfl_clamp_extend(f, lo, hi)});
        }
    } else {
        // x <= r(y)
        if (det > 0) {
            out.constraints.push_back({x, y, pfl_clamp_extend(fraclin(r), lo, hi)});
        } else {
            FracLin f = fraclin(negate_input(r));  // x <= r(-z) at z = -y
            out.constraints.push_back({x, -y, pfl_clamp_extend(f, -hi, -lo)});
        }
    }
    return out;
}

namespace {

std::pair<Rational, Rational> guard_range(const GuardPlan& plan, std::size_t g) {
    if (plan.guard_ranges.empty()) return {Rational(0), Rational(1)};
    return plan.guard_ranges[g];
}

}  // namespace

void validate_plan(const Polygon& poly, const GuardPlan& plan) {
    if (plan.guard_edges.empty()) throw GalleryError("plan has no guards");
    if (!plan.guard_ranges.empty()) {
        if (plan.guard_ranges.size() != plan.guard_edges.size()) throw GalleryError("one guard range per guard");
        for (const auto& [lo, hi] : plan.guard_ranges)
            if (lo < 0 || hi > 1 || lo > hi) throw GalleryError("guard range must be a subinterval of [0, 1]");
    }
    for (std::size_t g = 0; g < plan.guard_edges.size(); ++g)
        if (plan.guard_edges[g] >= poly.size()) throw GalleryError("guard " + std::to_string(g) + " on unknown edge");
    if (plan.intervals.size() != poly.size()) throw GalleryError("plan must partition every edge");
    for (std::size_t e = 0; e < poly.size(); ++e) {
        if (plan.intervals[e].empty()) throw GalleryError("edge " + std::to_string(e) + " is not covered");
        if (plan.intervals[e].size() > poly.size() * poly.size())
            throw GalleryError("edge " + std::to_string(e) + " has more than n^2 intervals");
        for (std::size_t g : plan.intervals[e])
            if (g >= plan.guard_edges.size()) throw GalleryError("interval assigned to unknown guard");
    }
}

Reduction reduce(const Polygon& poly, const GuardPlan& plan) {
    validate_polygon(poly);
    validate_plan(poly, plan);
    Reduction red;
    Instance& inst = red.instance;
    json cons_meta = json::array();

    auto add_var = [&](const std::string& name, Rational lo, Rational hi) {
        inst.names.push_back(name);
        inst.ranges.push_back({lo, hi});
        return inst.names.size() - 1;
    };
    std::vector<std::size_t> guard_var;
    for (std::size_t g = 0; g < plan.guard_edges.size(); ++g) {
        const auto& [lo, hi] = guard_range(plan, g);
        guard_var.push_back(add_var("g" + std::to_string(g), lo, hi));
    }
    // Endpoint m of edge e at parameter t; the first and last are pinned to 0 and 1.
    std::vector<std::vector<std::size_t>> end_var(poly.size());
    for (std::size_t e = 0; e < poly.size(); ++e) {
        std::size_t k = plan.intervals[e].size();
        for (std::size_t m = 0; m <= k; ++m) {
            Rational lo = m == k ? 1 : 0, hi = m == 0 ? 0 : 1;
            end_var[e].push_back(add_var("e" + std::to_string(e) + "_" + std::to_string(m), lo, hi));
        }
        for (std::size_t m = 0; m < k; ++m) {
            inst.constraints.push_back({Literal(end_var[e][m], false), Literal(end_var[e][m + 1], false), PFL::identity()});
            cons_meta.push_back({{"kind", "order"}, {"edge", e}});
        }
    }

    for (std::size_t e = 0; e < poly.size(); ++e) {
        EdgeFrame target = edge_frame(poly, e);
        std::size_t k = plan.intervals[e].size();
        for (std::size_t m = 0; m < k; ++m) {
            std::size_t g = plan.intervals[e][m];
            std::size_t ge = plan.guard_edges[g];
            if (ge == e) continue;  // a guard sees its own edge
            EdgeFrame guard = edge_frame(poly, ge);
            {
                // The guard must stand on the interior side of the target edge's line.
                Rational alpha = cross(target.a, guard.a), beta = cross(target.a, guard.b - target.b);
                Range& r = inst.ranges[guard_var[g]];
                Rational lo = r.lo.p(), hi = r.hi.p();
                if (alpha != 0) {
                    Rational t = -beta / alpha;
                    if (alpha > 0) lo = std::max(lo, t);
                    if (alpha < 0) hi = std::min(hi, t);
                }
                if (lo > hi || (alpha == 0 && beta < 0)) {
                    inst.constraints.push_back(contradiction(Literal(guard_var[g], false)));
                    cons_meta.push_back({{"kind", "front"}, {"guard", g}, {"edge", e}});
                } else {
                    r = {lo, hi};
                }
            }
            const auto& [glo, ghi] = guard_range(plan, g);
            Point g_ref = guard.at((glo + ghi) / 2);
            Point t_ref[2] = {target.at(Rational(static_cast<long>(m), static_cast<long>(k))),
                              target.at(Rational(static_cast<long>(m + 1), static_cast<long>(k)))};
            // Orientation of the other endpoint seen along each sightline.
            int other_side[2] = {sgn(cross(t_ref[0] - g_ref, t_ref[1] - g_ref)),
                                 sgn(cross(t_ref[1] - g_ref, t_ref[0] - g_ref))};
            if (other_side[0] == 0) continue;  // guard on the target's line: nothing can block
            for (std::size_t vi = 0; vi < poly.size(); ++vi) {
                const Point& v = poly.vertices[vi];
                if (vi == e || vi == (e + 1) % poly.size()) continue;
                if (cross(target.a, v - target.b) <= 0 || cross(guard.a, v - guard.b) <= 0) continue;
                // v must stay outside the triangle guard / interval: on the far side of one
                // sightline. Pick the sightline it is farthest beyond at the reference
                // configuration (the nearer one when v is inside).
                std::optional<std::size_t> pick;
                Rational best;
                for (std::size_t side = 0; side < 2; ++side) {
                    Point dir = t_ref[side] - g_ref;
                    Rational c = cross(dir, v - g_ref);
                    Rational beyond = -other_side[side] * c * (c < 0 ? -c : c) / (dir.x * dir.x + dir.y * dir.y);
                    if (!pick || beyond > best) {
                        pick = side;
                        best = beyond;
                    }
                }
                std::size_t side = *pick, j = m + side;
                Coeffs coeffs = visibility_coeffs(guard, target, v);
                Literal xl(guard_var[g], false), yl(end_var[e][j], false);
                BuiltConstraint b = build_constraint(coeffs, -other_side[side], xl, yl, inst.ranges[guard_var[g]],
                                                     inst.ranges[end_var[e][j]]);
                inst.ranges[guard_var[g]] = b.x_range;
                inst.ranges[end_var[e][j]] = b.y_range;
                for (auto& c : b.constraints) {
                    inst.constraints.push_back(std::move(c));
                    cons_meta.push_back({{"kind", "visibility"}, {"guard", g}, {"edge", e}, {"endpoint", j},
                                         {"vertex", vi}, {"other_endpoint", j == m ? m + 1 : m},
                                         {"blocking_at_reference", best < 0}});
                }
            }
        }
    }
    red.metadata = {{"constraints", cons_meta},
                    {"assumption", "each candidate blocking vertex stays beyond the sightline it was beyond at the "
                                   "reference configuration (guards at the midpoint of their declared range, "
                                   "interval endpoints evenly spaced); the side chosen there holds over the plan's cell"}};
    validate_instance(inst);
    return red;
}

EnumerationResult enumerate_plans(const Polygon& poly, std::size_t guards, std::size_t max_intervals) {
    validate_polygon(poly);
    EnumerationResult out;
    const std::size_t n = poly.size();
    GuardPlan plan;
    plan.guard_edges.assign(guards, 0);
    plan.intervals.assign(n, {});
    bool done = false;

    std::function<void(std::size_t)> edges_rec;
    std::function<void(std::size_t)> parts_rec = [&](std::size_t e) {
        if (done) return;
        if (e == n) {
            ++out.plans_tried;
            try {
                Reduction red = reduce(poly, plan);
                Verdict v = solve(red.instance);
                if (v.sat) {
                    out.sat = true;
                    out.plan = plan;
                    out.witness = v.witness;
                    done = true;
                }
            } catch (const GalleryError&) {
                ++out.plans_unsupported;
            }
            return;
        }
        for (std::size_t k = 1; k <= max_intervals && !done; ++k) {
            std::vector<std::size_t> assign(k, 0);
            while (!done) {
                // Adjacent intervals with the same guard are redundant.
                bool redundant = false;
                for (std::size_t i = 1; i < k; ++i) redundant |= assign[i] == assign[i - 1];
                if (!redundant) {
                    plan.intervals[e] = assign;
                    parts_rec(e + 1);
                }
                std::size_t i = 0;
                while (i < k && ++assign[i] == guards) assign[i++] = 0;
                if (i == k) break;
            }
        }
    };
    edges_rec = [&](std::size_t g) {
        if (done) return;
        if (g == guards) {
            parts_rec(0);
            return;
        }
        for (std::size_t e = g == 0 ? 0 : plan.guard_edges[g - 1]; e < n && !done; ++e) {
            plan.guard_edges[g] = e;
            edges_rec(g + 1);
        }
    };
    if (guards > 0) edges_rec(0);
    return out;
}

json polygon_to_json(const Polygon& poly) {
    json out = json::array();
    for (const auto& p : poly.vertices) out.push_back({rational_to_json(p.x), rational_to_json(p.y)});
    return out;
}

Polygon polygon_from_json(const json& j) {
    if (!j.is_array()) throw IoError("/", "polygon must be a list of [x, y] pairs");
    Polygon poly;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string w = "/" + std::to_string(i);
        if (!j[i].is_array() || j[i].size() != 2) throw IoError(w, "expected [x, y]");
        auto coord = [&](const json& c, const std::string& where) {
            if (c.is_number_integer()) return Rational(c.get<long>());
            Rational q = rational_from_json(c, where);
            if (q.get_den() != 1) throw IoError(where, "coordinates must be integers");
            return q;
        };
        poly.vertices.push_back({coord(j[i][0], w + "/0"), coord(j[i][1], w + "/1")});
    }
    try {
        validate_polygon(poly);
    } catch (const GalleryError& e) {
        throw IoError("/", e.what());
    }
    return poly;
}

json plan_to_json(const GuardPlan& plan) {
    json j = {{"guards", plan.guard_edges}, {"intervals", plan.intervals}};
    if (!plan.guard_ranges.empty()) {
        json r = json::array();
        for (const auto& [lo, hi] : plan.guard_ranges) r.push_back({rational_to_json(lo), rational_to_json(hi)});
        j["guard_ranges"] = r;
    }
    return j;
}

GuardPlan plan_from_json(const json& j) {
    GuardPlan plan;
    try {
        plan.guard_edges = j.at("guards").get<std::vector<std::size_t>>();
        plan.intervals = j.at("intervals").get<std::vector<std::vector<std::size_t>>>();
        if (j.contains("guard_ranges"))
            for (std::size_t g = 0; g < j["guard_ranges"].size(); ++g) {
                const json& r = j["guard_ranges"][g];
                std::string w = "/guard_ranges/" + std::to_string(g);
                if (!r.is_array() || r.size() != 2) throw IoError(w, "expected [lo, hi]");
                plan.guard_ranges.emplace_back(rational_from_json(r[0], w + "/0"), rational_from_json(r[1], w + "/1"));
            }
    } catch (const json::exception& e) {
        throw IoError("/", std::string("malformed plan: ") + e.what());
    }
    return plan;
}

Nook nook_fixture() {
    Nook nk;
    nk.x_line = {{-1, 0}, {0, 0}};
    nk.y_line = {{Rational(1, 2), 1}, {Rational(3, 2), 1}};
    nk.l_line = {{1, -2}, {0, 0}};
    Point x0 = nk.x_line.at(0), x1 = nk.x_line.at(1), x2 = nk.x_line.at(2);
    Point y_half = nk.y_line.at(Rational(1, 2));
    nk.P = 2 * (y_half - x0) + x0;
    Point l0 = nk.l_line.at(0), l1 = nk.l_line.at(1);
    Point I = line_intersection(nk.y_line.at(Rational(6, 5)), nk.P, l0, l1);
    Point J = line_intersection(nk.y_line.at(Rational(5, 3)), nk.P, l0, l1);
    nk.Q = line_intersection(I, x1, J, x2);
    return nk;
}

FracLin nook_threshold(const Nook& nook) {
    // Equality cases of the two side conditions: x = H1(w) through Q, y = H2(w) through P.
    FracLin h1 = fraclin(visibility_coeffs(nook.x_line, nook.l_line, nook.Q));
    FracLin h2 = fraclin(visibility_coeffs(nook.y_line, nook.l_line, nook.P));
    return fl_compose(h2, fl_invert(h1));
}

}  // namespace m2sat
