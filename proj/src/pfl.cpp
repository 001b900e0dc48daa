#include "m2sat/pfl.hpp"

#include <algorithm>

namespace m2sat {

std::size_t PFL::bits() const {
    std::size_t b = 0;
    for (std::size_t i = 0; i < piece_count(); ++i) b = std::max(b, piece(i).bits());
    for (const auto& x : breaks()) b = std::max(b, x.bits());
    return b;
}

PFL pfl_validate(const std::vector<ExtSurd>& breaks, const std::vector<Coeffs>& pieces) {
    if (pieces.size() != breaks.size() + 1)
        throw ValidationError("expected one more piece than interior breakpoints");
    for (std::size_t j = 0; j < breaks.size(); ++j) {
        if (!breaks[j].is_finite()) throw ValidationError("breakpoint " + std::to_string(j) + " is not finite");
        if (j > 0 && !(breaks[j - 1] < breaks[j]))
            throw ValidationError("breakpoints not increasing at " + breaks[j].to_string());
    }
    std::vector<Piece> ps;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Coeffs& k = pieces[i];
        if (k.det() == 0) throw ValidationError("piece " + std::to_string(i) + " is constant (ad - bc = 0)");
        FracLin f(k);
        ExtSurd l = i == 0 ? ExtSurd::neg_inf() : breaks[i - 1];
        ExtSurd r = i == breaks.size() ? ExtSurd::pos_inf() : breaks[i];
        if (auto p = f.pole()) {
            ExtSurd e(*p);
            if (l <= e && e <= r)
                throw ValidationError("piece " + std::to_string(i) + " has a pole at " + e.to_string() +
                                      " inside its interval");
        }
        if (!f.increasing())
            throw ValidationError("piece " + std::to_string(i) + " is not increasing (ad - bc < 0)");
        if ((i == 0 || i == breaks.size()) && !f.is_affine())
            throw ValidationError("end piece " + std::to_string(i) + " does not tend to infinity (c != 0)");
        ps.emplace_back(f);
    }
    std::vector<ExtSurd> values;
    for (std::size_t j = 0; j < breaks.size(); ++j) {
        ExtSurd left = piece_eval(ps[j], breaks[j]);
        ExtSurd right = piece_eval(ps[j + 1], breaks[j]);
        if (!(left == right))
            throw ValidationError("discontinuity at breakpoint " + breaks[j].to_string() + ": " + left.to_string() +
                                  " vs " + right.to_string());
        values.push_back(left);
    }
    return PFL(MonoMap(breaks, std::move(values), std::move(ps)));
}

PFL pfl_from_map(const MonoMap& m) {
    std::vector<Coeffs> pieces;
    for (const auto& p : m.pieces()) {
        const auto* f = std::get_if<FracLin>(&p);
        if (!f) throw ValidationError("constant piece in a bijection");
        pieces.push_back({f->a(), f->b(), f->c(), f->d()});
    }
    PFL out = pfl_validate(m.breaks(), pieces);
    for (std::size_t j = 0; j < m.breaks().size(); ++j)
        if (!(out.map().values()[j] == m.values()[j]))
            throw ValidationError("breakpoint value differs from piece limit at " + m.breaks()[j].to_string());
    return out;
}

PFL pfl_clamp_extend(const FracLin& h, const Rational& lo, const Rational& hi) {
    Rational hl = h.apply(lo), hh = h.apply(hi);
    std::vector<Coeffs> pieces;
    FracLin left = FracLin::affine(1, hl - lo), right = FracLin::affine(1, hh - hi);
    for (const FracLin* f : std::initializer_list<const FracLin*>{&left, &h, &right}) pieces.push_back({f->a(), f->b(), f->c(), f->d()});
    return pfl_validate({ExtSurd(lo), ExtSurd(hi)}, pieces);
}

PFL pfl_affine(const Rational& slope, const Rational& offset) {
    FracLin f = FracLin::affine(slope, offset);
    return pfl_validate({}, {{f.a(), f.b(), f.c(), f.d()}});
}

ExtSurd pfl_eval(const PFL& f, const ExtSurd& x) { return f.map().eval(x); }

ExtSurd pfl_eval(const MonoMap& f, const ExtSurd& x) { return f.eval(x); }

PFL pfl_compose(const PFL& f, const PFL& g) { return pfl_from_map(compose(f.map(), g.map())); }

PFL pfl_invert(const PFL& f) {
    std::vector<ExtSurd> breaks = f.map().values();
    std::vector<Coeffs> pieces;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        FracLin g = fl_invert(f.piece(i));
        pieces.push_back({g.a(), g.b(), g.c(), g.d()});
    }
    return pfl_validate(breaks, pieces);
}

PFL pfl_dual(const PFL& f) {
    std::vector<ExtSurd> breaks;
    for (auto it = f.map().values().rbegin(); it != f.map().values().rend(); ++it) breaks.push_back(-*it);
    std::vector<Coeffs> pieces;
    for (std::size_t i = f.piece_count(); i-- > 0;) {
        const FracLin& g = f.piece(i);
        pieces.push_back({g.d(), g.b(), g.c(), g.a()});
    }
    return pfl_validate(breaks, pieces);
}

MonoMap envelope_min(const std::vector<PFL>& fs) {
    std::vector<MonoMap> maps;
    maps.reserve(fs.size());
    for (const auto& f : fs) maps.push_back(f.map());
    return envelope_min(maps);
}

PFL pfl_min(const std::vector<PFL>& fs) { return pfl_from_map(envelope_min(fs)); }

MonoMap pfl_inf_power(const PFL& f) {
    // Maximal open intervals (alpha_i, beta_i) where f(x) < x. f^inf is alpha_i on
    // [beta_{i-1}, beta_i) and +inf beyond the last beta.
    auto atoms = sign_partition(f.map(), false);
    std::vector<std::pair<ExtSurd, ExtSurd>> below;
    for (const auto& a : atoms)
        if (a.sign < 0) below.emplace_back(a.iv.lo, a.iv.hi);
    std::vector<ExtSurd> breaks, values;
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < below.size(); ++i) {
        pieces.emplace_back(below[i].first);
        const ExtSurd& beta = below[i].second;
        if (beta.is_pos_inf()) break;
        breaks.push_back(beta);
        values.push_back(i + 1 < below.size() ? below[i + 1].first : ExtSurd::pos_inf());
    }
    if (pieces.size() == breaks.size()) pieces.emplace_back(ExtSurd::pos_inf());
    return MonoMap(std::move(breaks), std::move(values), std::move(pieces));
}

std::vector<ExtSurd> step_values(const MonoMap& step) {
    std::vector<ExtSurd> out = step.values();
    for (const auto& p : step.pieces()) out.push_back(std::get<ExtSurd>(p));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ExtSurd> attracting_points(const PFL& f) { return step_values(pfl_inf_power(f)); }

}  // namespace m2sat
