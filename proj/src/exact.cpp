#include "m2sat/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace m2sat {

namespace {

int sgn(const Rational& x) { return mpq_sgn(x.get_mpq_t()); }

int sgn_int(const Integer& x) { return mpz_sgn(x.get_mpz_t()); }

std::strong_ordering to_ordering(int s) {
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

// Sign of u + v*sqrt(r), r >= 0 and not a nonzero perfect square unless v = 0.
int sign_single(const Rational& u, const Rational& v, const Integer& r) {
    const int su = sgn(u);
    if (v == 0 || r == 0) return su;
    const int sv = sgn(v);
    if (su == 0 || su == sv) return sv;
    const Rational lhs = u * u;
    const Rational rhs = v * v * Rational(r);
    const int c = cmp(lhs, rhs);
    if (c > 0) return su;
    if (c < 0) return sv;
    return 0;
}

constexpr std::array<unsigned, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                   43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

std::string rational_text(const Rational& r) { return r.get_str(); }

}  // namespace

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::size_t bit_length(const Integer& z) {
    if (z == 0) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

// ---------------------------------------------------------------- Surd

Surd::Surd(const Rational& p) : p_(p) { p_.canonicalize(); }

Surd Surd::make(const Rational& p, const Rational& q, const Integer& r) {
    if (r < 0) throw std::invalid_argument("negative radicand");
    Surd s;
    s.p_ = p;
    s.p_.canonicalize();
    if (q == 0 || r == 0) return s;
    Integer rad = r;
    Rational coef = q;
    for (unsigned pr : kSmallPrimes) {
        const unsigned long sq = static_cast<unsigned long>(pr) * pr;
        while (mpz_divisible_ui_p(rad.get_mpz_t(), sq) != 0) {
            rad /= sq;
            coef *= pr;
        }
    }
    if (mpz_perfect_square_p(rad.get_mpz_t()) != 0) {
        Integer root;
        mpz_sqrt(root.get_mpz_t(), rad.get_mpz_t());
        s.p_ += coef * Rational(root);
        s.p_.canonicalize();
        return s;
    }
    coef.canonicalize();
    s.q_ = coef;
    s.r_ = rad;
    return s;
}

Surd Surd::operator-() const {
    Surd s = *this;
    s.p_ = -p_;
    s.q_ = -q_;
    return s;
}

std::size_t Surd::bits() const {
    return std::max({bit_length(p_.get_num()), bit_length(p_.get_den()), bit_length(q_.get_num()),
                     bit_length(q_.get_den()), bit_length(r_)});
}

double Surd::to_double() const {
    if (is_rational()) return p_.get_d();
    mpf_class root(r_, 1024);
    root = sqrt(root);
    mpf_class v(p_, 1024);
    v += mpf_class(q_, 1024) * root;
    return v.get_d();
}

std::string Surd::to_string() const {
    if (is_rational()) return rational_text(p_);
    std::ostringstream os;
    if (p_ != 0) os << rational_text(p_) << (q_ > 0 ? "+" : "");
    os << rational_text(q_) << "*sqrt(" << r_.get_str() << ")";
    return os.str();
}

std::strong_ordering surd_cmp(const Surd& s1, const Surd& s2) {
    const Rational A = s1.p() - s2.p();
    const Rational& B = s1.q();
    const Rational C = -s2.q();
    const Integer& r1 = s1.r();
    const Integer& r2 = s2.r();
    if (C == 0) return to_ordering(sign_single(A, B, r1));
    if (B == 0) return to_ordering(sign_single(A, C, r2));
    if (r1 == r2) return to_ordering(sign_single(A, B + C, r1));
    // X = A + B*sqrt(r1), Y = C*sqrt(r2); sign(X + Y) via |X| vs |Y|.
    const int sx = sign_single(A, B, r1);
    const int sy = sgn(C);
    if (sx == 0) return to_ordering(sy);
    if (sx == sy) return to_ordering(sx);
    const Rational u = A * A + B * B * Rational(r1) - C * C * Rational(r2);
    const Rational v = 2 * A * B;
    const int mag = sign_single(u, v, r1);
    if (mag > 0) return to_ordering(sx);
    if (mag < 0) return to_ordering(sy);
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- ExtSurd

const Surd& ExtSurd::value() const {
    if (!is_finite()) throw std::logic_error("value() on infinite ExtSurd");
    return value_;
}

ExtSurd ExtSurd::operator-() const {
    switch (kind_) {
        case Kind::NegInf: return pos_inf();
        case Kind::PosInf: return neg_inf();
        default: return ExtSurd(-value_);
    }
}

double ExtSurd::to_double() const {
    switch (kind_) {
        case Kind::NegInf: return -HUGE_VAL;
        case Kind::PosInf: return HUGE_VAL;
        default: return value_.to_double();
    }
}

std::string ExtSurd::to_string() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "inf";
        default: return value_.to_string();
    }
}

std::strong_ordering surd_cmp(const ExtSurd& a, const ExtSurd& b) {
    auto rank = [](ExtSurd::Kind k) { return k == ExtSurd::Kind::NegInf ? 0 : k == ExtSurd::Kind::Finite ? 1 : 2; };
    const int ra = rank(a.kind());
    const int rb = rank(b.kind());
    if (ra != rb || ra != 1) return ra <=> rb;
    return surd_cmp(a.value(), b.value());
}

std::pair<Rational, Rational> rational_bounds(const Surd& s, unsigned precision_bits) {
    if (s.is_rational()) return {s.p(), s.p()};
    Integer qceil;
    mpz_cdiv_q(qceil.get_mpz_t(), s.q().get_num_mpz_t(), s.q().get_den_mpz_t());
    precision_bits += static_cast<unsigned>(bit_length(qceil)) + 1;
    Integer scaled = s.r();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * precision_bits);
    Integer root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, precision_bits);
    Rational lo = make_rational(root, scale);
    Rational hi = make_rational(root + 1, scale);
    if (s.q() > 0) {
        lo = s.p() + s.q() * lo;
        hi = s.p() + s.q() * hi;
    } else {
        Rational t = s.p() + s.q() * hi;
        hi = s.p() + s.q() * lo;
        lo = t;
    }
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw std::invalid_argument("simplest_between: empty interval");
    if (lo < 0 && hi > 0) return Rational(0);
    if (hi <= 0) return -simplest_between(-hi, -lo);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    const Rational next(fl + 1);
    if (next < hi) return next;
    const Rational flq(fl);
    const Rational lo_frac = lo - flq;
    const Rational hi_frac = hi - flq;
    if (lo_frac == 0) {
        // (0, h): 1/(floor(1/h) + 1)
        Rational inv = 1 / hi_frac;
        Integer k;
        mpz_fdiv_q(k.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
        Rational out = flq + Rational(1) / Rational(k + 1);
        out.canonicalize();
        return out;
    }
    Rational inner = simplest_between(1 / hi_frac, 1 / lo_frac);
    Rational out = flq + 1 / inner;
    out.canonicalize();
    return out;
}

Rational rational_between(const ExtSurd& lo, const ExtSurd& hi) {
    if (!(lo < hi)) throw std::invalid_argument("rational_between: empty interval");
    if (!lo.is_finite() && !hi.is_finite()) return Rational(0);
    auto floor_of = [](const Rational& x) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return f;
    };
    if (!lo.is_finite()) {
        const Rational l = rational_bounds(hi.value(), 8).first;
        return Rational(floor_of(l) - 1);
    }
    if (!hi.is_finite()) {
        const Rational h = rational_bounds(lo.value(), 8).second;
        return Rational(floor_of(h) + 1);
    }
    for (unsigned prec = 16;; prec *= 2) {
        const Rational a = rational_bounds(lo.value(), prec).second;
        const Rational b = rational_bounds(hi.value(), prec).first;
        if (a < b) return simplest_between(a, b);
        if (prec > (1U << 20)) throw std::logic_error("rational_between: no separation");
    }
}

// ---------------------------------------------------------------- FracLin

FracLin::FracLin(Integer a, Integer b, Integer c, Integer d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (det() == 0) throw std::invalid_argument("FracLin requires ad - bc != 0");
    Integer g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d_.get_mpz_t());
    const Integer* first = a_ != 0 ? &a_ : b_ != 0 ? &b_ : c_ != 0 ? &c_ : &d_;
    if (*first < 0) g = -g;
    if (g != 1) {
        mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(d_.get_mpz_t(), d_.get_mpz_t(), g.get_mpz_t());
    }
}

FracLin FracLin::affine(const Rational& slope, const Rational& offset) {
    if (slope <= 0) throw std::invalid_argument("affine slope must be positive");
    Integer l;
    mpz_lcm(l.get_mpz_t(), slope.get_den_mpz_t(), offset.get_den_mpz_t());
    Integer a = slope.get_num() * (l / slope.get_den());
    Integer b = offset.get_num() * (l / offset.get_den());
    return FracLin(a, b, 0, l);
}

std::optional<Rational> FracLin::pole() const {
    if (c_ == 0) return std::nullopt;
    return make_rational(-d_, c_);
}

std::size_t FracLin::bits() const {
    return std::max({bit_length(a_), bit_length(b_), bit_length(c_), bit_length(d_)});
}

Rational FracLin::apply(const Rational& x) const {
    const Rational den = Rational(c_) * x + Rational(d_);
    if (den == 0) throw PoleError("evaluation at pole " + x.get_str() + " of " + to_string());
    Rational out = (Rational(a_) * x + Rational(b_)) / den;
    out.canonicalize();
    return out;
}

std::string FracLin::to_string() const {
    std::ostringstream os;
    os << "(" << a_ << "x+" << b_ << ")/(" << c_ << "x+" << d_ << ")";
    return os.str();
}

bool lex_less(const FracLin& f, const FracLin& g) {
    if (f.a() != g.a()) return f.a() < g.a();
    if (f.b() != g.b()) return f.b() < g.b();
    if (f.c() != g.c()) return f.c() < g.c();
    return f.d() < g.d();
}

Surd fl_apply(const FracLin& f, const Surd& x) {
    const Rational a(f.a()), b(f.b()), c(f.c()), d(f.d());
    if (x.is_rational()) return Surd(f.apply(x.p()));
    const Rational& p = x.p();
    const Rational& q = x.q();
    const Rational r(x.r());
    // Multiply through by the conjugate of the denominator.
    const Rational num_rat = a * p + b;
    const Rational den_rat = c * p + d;
    const Rational den = den_rat * den_rat - c * c * q * q * r;
    const Rational P = (num_rat * den_rat - a * c * q * q * r) / den;
    const Rational Q = q * Rational(f.det()) / den;
    return Surd::make(P, Q, x.r());
}

ExtSurd fl_apply(const FracLin& f, const ExtSurd& x) {
    if (x.is_finite()) return ExtSurd(fl_apply(f, x.value()));
    if (f.c() != 0) return ExtSurd(make_rational(f.a(), f.c()));
    return sgn_int(f.a()) * sgn_int(f.d()) > 0 ? x : -x;
}

FracLin fl_compose(const FracLin& f, const FracLin& g) {
    return FracLin(f.a() * g.a() + f.b() * g.c(), f.a() * g.b() + f.b() * g.d(), f.c() * g.a() + f.d() * g.c(),
                   f.c() * g.b() + f.d() * g.d());
}

FracLin fl_invert(const FracLin& f) { return FracLin(f.d(), -f.b(), -f.c(), f.a()); }

std::vector<ExtSurd> solve_quadratic(const Integer& A, const Integer& B, const Integer& C) {
    std::vector<ExtSurd> out;
    if (A == 0) {
        if (B != 0) out.emplace_back(make_rational(-C, B));
        return out;
    }
    const Integer disc = B * B - 4 * A * C;
    const int s = sgn_int(disc);
    if (s < 0) return out;
    const Rational p = make_rational(-B, 2 * A);
    if (s == 0) {
        out.emplace_back(p);
        return out;
    }
    const Rational q = make_rational(Integer(1), 2 * A);
    out.emplace_back(Surd::make(p, q, disc));
    out.emplace_back(Surd::make(p, -q, disc));
    if (out[1] < out[0]) std::swap(out[0], out[1]);
    return out;
}

FixedPoints fl_fixed_points(const FracLin& f) {
    FixedPoints fp;
    if (f.is_identity()) {
        fp.all = true;
        return fp;
    }
    fp.roots = solve_quadratic(f.c(), f.d() - f.a(), -f.b());
    return fp;
}

std::vector<ExtSurd> fl_intersections(const FracLin& f, const FracLin& g) {
    const Integer A = f.a() * g.c() - g.a() * f.c();
    const Integer B = f.a() * g.d() + f.b() * g.c() - g.a() * f.d() - g.b() * f.c();
    const Integer C = f.b() * g.d() - g.b() * f.d();
    if (A == 0 && B == 0 && C == 0) throw std::invalid_argument("fl_intersections: identical maps");
    std::vector<ExtSurd> roots = solve_quadratic(A, B, C);
    std::erase_if(roots, [&](const ExtSurd& x) {
        if (!x.value().is_rational()) return false;
        const Rational& v = x.value().p();
        auto at_pole = [&](const FracLin& h) { return Rational(h.c()) * v + Rational(h.d()) == 0; };
        return at_pole(f) || at_pole(g);
    });
    return roots;
}

Coeffs negate_output(const Coeffs& k) { return {-k.a, -k.b, k.c, k.d}; }
Coeffs negate_input(const Coeffs& k) { return {-k.a, k.b, -k.c, k.d}; }

}  // namespace m2sat
