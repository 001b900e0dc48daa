#pragma once

// Boundary-guarding plans on a simple polygon, reduced to monotone two-variable
// constraints: guard positions and interval endpoints become variables, and each
// potentially blocking vertex gives a fractional-linear side condition on a sightline.

#include "m2sat/instance.hpp"
#include "m2sat/io.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace m2sat {

class GalleryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Point {
    Rational x, y;
    friend bool operator==(const Point&, const Point&) = default;
};

Point operator+(const Point& p, const Point& q);
Point operator-(const Point& p, const Point& q);
Point operator*(const Rational& s, const Point& p);
/// det [p q] = p.x q.y - p.y q.x.
Rational cross(const Point& p, const Point& q);

/// Counterclockwise simple polygon.
struct Polygon {
    std::vector<Point> vertices;
    std::size_t size() const { return vertices.size(); }
};

/// Throws GalleryError unless the polygon has at least 3 vertices, positive
/// orientation and no two non-adjacent edges touching.
void validate_polygon(const Polygon& poly);

/// Points a*t + b, t in [0, 1].
struct EdgeFrame {
    Point a, b;
    Point at(const Rational& t) const { return t * a + b; }
};

/// Edge e runs from vertex e to vertex e+1.
EdgeFrame edge_frame(const Polygon& poly, std::size_t e);

/// Coefficients with (A x + B - v) x (C y + D - v) = x (c y + d) - (a y + b), for
/// guard frame (A, B) and target frame (C, D), scaled to integers by a positive factor.
Coeffs visibility_coeffs(const EdgeFrame& guard, const EdgeFrame& target, const Point& v);

/// Result of turning sigma * (x (cy+d) - (ay+b)) >= 0 on the box xr * yr into constraints.
struct BuiltConstraint {
    std::vector<Constraint> constraints;
    Range x_range;             // possibly narrowed
    Range y_range;             // narrowed only when the condition does not involve x
    bool contradiction = false;  // the condition fails for every x in range
};

/// The pole of (ay+b)/(cy+d) must lie outside yr, and for ad - bc = 0 the sign of
/// cy + d must be constant on yr; otherwise GalleryError.
BuiltConstraint build_constraint(const Coeffs& k, int sigma, Literal x, Literal y, const Range& xr, const Range& yr);

/// For each guard its edge and optionally a sub-segment [lo, hi] of that edge's
/// parameter range (default [0, 1]); for each polygon edge the guard responsible for
/// each interval, in boundary order.
struct GuardPlan {
    std::vector<std::size_t> guard_edges;
    std::vector<std::vector<std::size_t>> intervals;
    std::vector<std::pair<Rational, Rational>> guard_ranges;  // empty or one per guard
    friend bool operator==(const GuardPlan&, const GuardPlan&) = default;
};

void validate_plan(const Polygon& poly, const GuardPlan& plan);

struct Reduction {
    Instance instance;
    json metadata;  // generating vertex and sightline per constraint, and the assumption made
};

Reduction reduce(const Polygon& poly, const GuardPlan& plan);

struct EnumerationResult {
    bool sat = false;
    std::optional<GuardPlan> plan;  // first satisfiable plan
    std::vector<Surd> witness;
    std::size_t plans_tried = 0;
    std::size_t plans_unsupported = 0;  // rejected by build_constraint
};

/// Exhaustive over guard edges (nondecreasing) and per-edge partitions of at most
/// max_intervals intervals. UNSAT is relative to the caps.
EnumerationResult enumerate_plans(const Polygon& poly, std::size_t guards, std::size_t max_intervals);

json polygon_to_json(const Polygon& poly);
Polygon polygon_from_json(const json& j);
json plan_to_json(const GuardPlan& plan);
GuardPlan plan_from_json(const json& j);

/// Nook for (4x+2)/(x+4) >= y: x-guard at (-x, 0), y-guard at (3/2 + y/2, 1 + y).
struct Nook {
    EdgeFrame x_line, y_line, l_line;
    Point P, Q;
};

Nook nook_fixture();

/// y-threshold of the nook as a function of x: the y-guard sightline through P
/// and the x-guard sightline through Q must meet on l.
FracLin nook_threshold(const Nook& nook);

}  // namespace m2sat
