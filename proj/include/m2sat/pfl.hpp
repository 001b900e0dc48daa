#pragma once

// Continuous increasing piecewise fractional-linear bijections of the real line.

#include "m2sat/monomap.hpp"

#include <stdexcept>
#include <vector>

namespace m2sat {

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PFL {
public:
    PFL() = default;
    static PFL identity() { return {}; }

    const MonoMap& map() const { return map_; }
    const std::vector<ExtSurd>& breaks() const { return map_.breaks(); }
    const FracLin& piece(std::size_t i) const { return std::get<FracLin>(map_.pieces()[i]); }
    std::size_t piece_count() const { return map_.piece_count(); }
    std::size_t bits() const;
    std::string to_string() const { return map_.to_string(); }

    friend bool operator==(const PFL& a, const PFL& b) { return a.map_ == b.map_; }

private:
    friend PFL pfl_validate(const std::vector<ExtSurd>& breaks, const std::vector<Coeffs>& pieces);
    explicit PFL(MonoMap m) : map_(std::move(m)) {}
    MonoMap map_;
};

/// Validates raw data: pieces[i] applies on (breaks[i-1], breaks[i]). Throws
/// ValidationError naming the offending piece or breakpoint.
PFL pfl_validate(const std::vector<ExtSurd>& breaks, const std::vector<Coeffs>& pieces);
/// Validates a MonoMap as a PFL.
PFL pfl_from_map(const MonoMap& m);

/// h on [lo, hi] extended by lines of slope 1 on both sides; h must be pole-free on [lo, hi].
PFL pfl_clamp_extend(const FracLin& h, const Rational& lo, const Rational& hi);
PFL pfl_affine(const Rational& slope, const Rational& offset);

ExtSurd pfl_eval(const PFL& f, const ExtSurd& x);
ExtSurd pfl_eval(const MonoMap& f, const ExtSurd& x);
PFL pfl_compose(const PFL& f, const PFL& g);  // f after g
PFL pfl_invert(const PFL& f);
/// x -> -f^{-1}(-x).
PFL pfl_dual(const PFL& f);
/// Pointwise minimum of PFLs, which is again a PFL.
PFL pfl_min(const std::vector<PFL>& fs);
MonoMap envelope_min(const std::vector<PFL>& fs);

/// f^inf(x) = inf{ y >= sup{ z <= x : z <= f(z) } : y > f(y) }, a nondecreasing step map.
MonoMap pfl_inf_power(const PFL& f);
/// Ascending value set of pfl_inf_power(f).
std::vector<ExtSurd> attracting_points(const PFL& f);
std::vector<ExtSurd> step_values(const MonoMap& step);

}  // namespace m2sat
