#pragma once

// Nondecreasing piecewise fractional-linear maps on the extended reals, possibly
// discontinuous and possibly taking the values -inf / +inf.

#include "m2sat/exact.hpp"

#include <string>
#include <variant>
#include <vector>

namespace m2sat {

/// A piece is either a FracLin (strictly increasing, pole-free on its open
/// interval) or a constant value.
using Piece = std::variant<FracLin, ExtSurd>;

bool piece_equal(const Piece& a, const Piece& b);
ExtSurd piece_eval(const Piece& p, const ExtSurd& x);
/// One-sided limit of a piece at x; a pole gives +inf from the left and -inf from the right.
ExtSurd piece_limit(const Piece& p, const ExtSurd& x, bool from_left);
std::string piece_to_string(const Piece& p);

/// Breakpoints b_0 < ... < b_{m-1} (finite), the value taken exactly at each
/// breakpoint, and m+1 pieces covering the open gaps (-inf,b_0), (b_0,b_1), ...
class MonoMap {
public:
    MonoMap() : pieces_{Piece{FracLin::identity()}} {}
    static MonoMap identity() { return {}; }
    static MonoMap constant(const ExtSurd& v);
    static MonoMap single(const FracLin& f);

    /// Builds and canonicalizes (merges redundant breakpoints). Throws
    /// std::invalid_argument if the data is not a nondecreasing map.
    MonoMap(std::vector<ExtSurd> breaks, std::vector<ExtSurd> values, std::vector<Piece> pieces);

    const std::vector<ExtSurd>& breaks() const { return breaks_; }
    const std::vector<ExtSurd>& values() const { return values_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::size_t piece_count() const { return pieces_.size(); }

    ExtSurd eval(const ExtSurd& x) const;
    /// Limit from the left / right at an interior point of a gap or at a breakpoint.
    ExtSurd left_limit(std::size_t break_index) const;
    ExtSurd right_limit(std::size_t break_index) const;
    /// Lower / upper ends of the image of gap i (limits, exclusive).
    ExtSurd gap_low(std::size_t i) const;
    ExtSurd gap_high(std::size_t i) const;
    ExtSurd gap_left(std::size_t i) const;   // left end of gap i (may be -inf)
    ExtSurd gap_right(std::size_t i) const;  // right end of gap i (may be +inf)

    bool is_step() const;  // every piece constant
    /// Invariant check (nondecreasing, pole-free pieces); returns a problem description or "".
    std::string check() const;
    std::string to_string() const;

    /// Replace every constant piece / breakpoint value v by relabel(v). The caller
    /// guarantees the relabelling is nondecreasing on the values present.
    template <typename Fn>
    MonoMap relabel(Fn&& fn) const;

    friend bool operator==(const MonoMap& a, const MonoMap& b);

private:
    void canonicalize();
    std::vector<ExtSurd> breaks_;
    std::vector<ExtSurd> values_;
    std::vector<Piece> pieces_;
};

/// (outer o inner)(x) = outer(inner(x)).
MonoMap compose(const MonoMap& outer, const MonoMap& inner);

/// Exact pointwise minimum. Coinciding pieces resolve to the lexicographically
/// smaller normalized FracLin.
MonoMap envelope_min(const std::vector<MonoMap>& maps);

/// Closed, half-open or open real interval with ExtSurd ends. Infinite ends are
/// always treated as open.
struct Interval {
    ExtSurd lo, hi;
    bool lo_closed = true, hi_closed = true;
    bool empty() const;
    bool contains(const ExtSurd& x) const;
    static Interval point(const ExtSurd& x) { return {x, x, true, true}; }
    static Interval open(const ExtSurd& lo, const ExtSurd& hi) { return {lo, hi, false, false}; }
    static Interval closed(const ExtSurd& lo, const ExtSurd& hi) { return {lo, hi, true, true}; }
    std::string to_string() const;
};

/// Sorted, disjoint union of intervals.
using IntervalSet = std::vector<Interval>;

/// Maximal interval on which sign(m(x) - x) (or sign(m(x) + x)) is constant.
struct SignAtom {
    Interval iv;
    int sign = 0;
};

/// Partition of the real line by the sign of m(x) - x (against_negated = false)
/// or m(x) + x (against_negated = true), in ascending order with neighbours of
/// equal sign fused.
std::vector<SignAtom> sign_partition(const MonoMap& m, bool against_negated);

IntervalSet atoms_where(const std::vector<SignAtom>& atoms, bool (*pred)(int));
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement(const IntervalSet& s);
/// Sorts and fuses overlapping or touching intervals.
IntervalSet normalize(IntervalSet s);
bool contains(const IntervalSet& s, const ExtSurd& x);
std::string to_string(const IntervalSet& s);

template <typename Fn>
MonoMap MonoMap::relabel(Fn&& fn) const {
    std::vector<ExtSurd> values;
    values.reserve(values_.size());
    for (const auto& v : values_) values.push_back(fn(v));
    std::vector<Piece> pieces;
    pieces.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        if (const auto* k = std::get_if<ExtSurd>(&p)) {
            pieces.emplace_back(fn(*k));
        } else {
            throw std::invalid_argument("relabel needs a step map");
        }
    }
    return MonoMap(breaks_, std::move(values), std::move(pieces));
}

}  // namespace m2sat
