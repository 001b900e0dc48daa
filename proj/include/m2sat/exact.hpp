#pragma once

// Exact rationals, quadratic surds p + q*sqrt(r) and fractional-linear
// maps (ax+b)/(cx+d). Everything here is a value type; no operation rounds.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace m2sat {

using Integer = mpz_class;
using Rational = mpq_class;

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

Rational make_rational(const Integer& num, const Integer& den);

/// Number of bits of |z| (0 for z = 0).
std::size_t bit_length(const Integer& z);

/// Canonical p + q*sqrt(r). r = 0 iff q = 0, and r is never a perfect square.
/// Small square factors of r are folded into q; r is not guaranteed square-free
/// beyond trial division, which only affects representation, never comparison.
class Surd {
public:
    Surd() = default;
    Surd(const Rational& p);  // NOLINT(google-explicit-constructor)
    Surd(long v) : Surd(Rational(v)) {}  // NOLINT(google-explicit-constructor)

    static Surd make(const Rational& p, const Rational& q, const Integer& r);

    const Rational& p() const { return p_; }
    const Rational& q() const { return q_; }
    const Integer& r() const { return r_; }
    bool is_rational() const { return q_ == 0; }

    Surd operator-() const;

    /// Largest bit length among numerators/denominators of p, q and r.
    std::size_t bits() const;
    /// Approximation for diagnostics and floating-point oracles only.
    double to_double() const;
    std::string to_string() const;

private:
    Rational p_{0};
    Rational q_{0};
    Integer r_{0};
};

/// Exact sign of s1 - s2.
std::strong_ordering surd_cmp(const Surd& s1, const Surd& s2);

inline bool operator==(const Surd& a, const Surd& b) { return surd_cmp(a, b) == 0; }
inline std::strong_ordering operator<=>(const Surd& a, const Surd& b) { return surd_cmp(a, b); }

/// Surd extended with -inf and +inf.
class ExtSurd {
public:
    enum class Kind { NegInf, Finite, PosInf };

    ExtSurd() = default;
    ExtSurd(const Surd& s) : kind_(Kind::Finite), value_(s) {}  // NOLINT
    ExtSurd(const Rational& r) : kind_(Kind::Finite), value_(r) {}  // NOLINT
    ExtSurd(long v) : kind_(Kind::Finite), value_(v) {}  // NOLINT

    static ExtSurd pos_inf() { return ExtSurd(Kind::PosInf); }
    static ExtSurd neg_inf() { return ExtSurd(Kind::NegInf); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    /// Precondition: is_finite().
    const Surd& value() const;

    ExtSurd operator-() const;
    double to_double() const;
    std::string to_string() const;
    std::size_t bits() const { return is_finite() ? value_.bits() : 0; }

private:
    explicit ExtSurd(Kind k) : kind_(k) {}
    Kind kind_ = Kind::Finite;
    Surd value_;
};

std::strong_ordering surd_cmp(const ExtSurd& a, const ExtSurd& b);

inline bool operator==(const ExtSurd& a, const ExtSurd& b) { return surd_cmp(a, b) == 0; }
inline std::strong_ordering operator<=>(const ExtSurd& a, const ExtSurd& b) { return surd_cmp(a, b); }

inline const ExtSurd& min_of(const ExtSurd& a, const ExtSurd& b) { return b < a ? b : a; }
inline const ExtSurd& max_of(const ExtSurd& a, const ExtSurd& b) { return a < b ? b : a; }

/// Rational lower and upper bounds on a finite surd, each within 2^-precision_bits.
std::pair<Rational, Rational> rational_bounds(const Surd& s, unsigned precision_bits);

/// Simplest rational strictly inside the open interval (lo, hi); lo < hi required.
Rational simplest_between(const Rational& lo, const Rational& hi);

/// A rational strictly between two extended surds; lo < hi required.
Rational rational_between(const ExtSurd& lo, const ExtSurd& hi);

/// Raw coefficient quadruple, no invariants. Used for degenerate or decreasing maps.
struct Coeffs {
    Integer a, b, c, d;
    Integer det() const { return a * d - b * c; }
};

/// x -> (ax+b)/(cx+d) with ad - bc != 0, gcd(a,b,c,d) = 1 and the first nonzero
/// coefficient positive. Piecewise maps only admit increasing pieces (ad - bc > 0);
/// decreasing maps are allowed here so the kernel can handle raw constraint data.
class FracLin {
public:
    FracLin() : a_(1), b_(0), c_(0), d_(1) {}
    FracLin(Integer a, Integer b, Integer c, Integer d);
    explicit FracLin(const Coeffs& k) : FracLin(k.a, k.b, k.c, k.d) {}

    static FracLin identity() { return {}; }
    /// Affine map slope*x + offset, slope > 0.
    static FracLin affine(const Rational& slope, const Rational& offset);

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& d() const { return d_; }
    Integer det() const { return a_ * d_ - b_ * c_; }
    bool increasing() const { return det() > 0; }
    bool is_identity() const { return a_ == d_ && b_ == 0 && c_ == 0; }
    bool is_affine() const { return c_ == 0; }
    /// -d/c when c != 0.
    std::optional<Rational> pole() const;
    std::size_t bits() const;

    Rational apply(const Rational& x) const;
    std::string to_string() const;

    friend bool operator==(const FracLin&, const FracLin&) = default;

private:
    Integer a_, b_, c_, d_;
};

/// Lexicographic (a, b, c, d) order on normalized coefficients.
bool lex_less(const FracLin& f, const FracLin& g);

ExtSurd fl_apply(const FracLin& f, const ExtSurd& x);
Surd fl_apply(const FracLin& f, const Surd& x);
FracLin fl_compose(const FracLin& f, const FracLin& g);  // f after g
FracLin fl_invert(const FracLin& f);

struct FixedPoints {
    bool all = false;              // f is the identity
    std::vector<ExtSurd> roots;    // ascending, at most two
};
FixedPoints fl_fixed_points(const FracLin& f);

/// Real points where f and g agree (poles excluded), ascending. f != g required.
std::vector<ExtSurd> fl_intersections(const FracLin& f, const FracLin& g);

/// Real roots of A x^2 + B x + C = 0, ascending; empty when all coefficients vanish.
std::vector<ExtSurd> solve_quadratic(const Integer& A, const Integer& B, const Integer& C);

/// x -> -x conjugation helpers on raw coefficients.
Coeffs negate_output(const Coeffs& k);  // -h(x)
Coeffs negate_input(const Coeffs& k);   // h(-x)

}  // namespace m2sat
