#include "m2sat/monomap.hpp"

#include <algorithm>
#include <sstream>

namespace m2sat {

namespace {

bool pole_inside(const FracLin& f, const ExtSurd& l, const ExtSurd& r) {
    auto p = f.pole();
    if (!p) return false;
    ExtSurd e(*p);
    return l < e && e < r;
}

// Sorted, deduplicated copy.
void sort_unique(std::vector<ExtSurd>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool piece_equal(const Piece& a, const Piece& b) {
    if (a.index() != b.index()) return false;
    if (const auto* f = std::get_if<FracLin>(&a)) return *f == std::get<FracLin>(b);
    return std::get<ExtSurd>(a) == std::get<ExtSurd>(b);
}

ExtSurd piece_eval(const Piece& p, const ExtSurd& x) {
    if (const auto* f = std::get_if<FracLin>(&p)) return fl_apply(*f, x);
    return std::get<ExtSurd>(p);
}

ExtSurd piece_limit(const Piece& p, const ExtSurd& x, bool from_left) {
    if (const auto* f = std::get_if<FracLin>(&p)) {
        if (x.is_finite() && x.value().is_rational()) {
            auto pole = f->pole();
            if (pole && *pole == x.value().p()) return from_left ? ExtSurd::pos_inf() : ExtSurd::neg_inf();
        }
        return fl_apply(*f, x);
    }
    return std::get<ExtSurd>(p);
}

std::string piece_to_string(const Piece& p) {
    if (const auto* f = std::get_if<FracLin>(&p)) return f->to_string();
    return "const " + std::get<ExtSurd>(p).to_string();
}

MonoMap MonoMap::constant(const ExtSurd& v) { return MonoMap({}, {}, {Piece{v}}); }

MonoMap MonoMap::single(const FracLin& f) { return MonoMap({}, {}, {Piece{f}}); }

MonoMap::MonoMap(std::vector<ExtSurd> breaks, std::vector<ExtSurd> values, std::vector<Piece> pieces)
    : breaks_(std::move(breaks)), values_(std::move(values)), pieces_(std::move(pieces)) {
    if (values_.size() != breaks_.size() || pieces_.size() != breaks_.size() + 1)
        throw std::invalid_argument("monomap: inconsistent sizes");
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (!breaks_[i].is_finite()) throw std::invalid_argument("monomap: infinite breakpoint");
        if (i > 0 && !(breaks_[i - 1] < breaks_[i]))
            throw std::invalid_argument("monomap: breakpoints not strictly increasing");
    }
    for (const auto& p : pieces_)
        if (const auto* f = std::get_if<FracLin>(&p); f && !f->increasing())
            throw std::invalid_argument("monomap: decreasing piece " + f->to_string());
    canonicalize();
}

void MonoMap::canonicalize() {
    std::vector<ExtSurd> nb, nv;
    std::vector<Piece> np;
    np.push_back(pieces_[0]);
    for (std::size_t j = 0; j < breaks_.size(); ++j) {
        const Piece& next = pieces_[j + 1];
        if (piece_equal(np.back(), next) && values_[j] == piece_limit(next, breaks_[j], false) &&
            values_[j] == piece_limit(next, breaks_[j], true)) {
            continue;
        }
        nb.push_back(breaks_[j]);
        nv.push_back(values_[j]);
        np.push_back(next);
    }
    breaks_ = std::move(nb);
    values_ = std::move(nv);
    pieces_ = std::move(np);
}

ExtSurd MonoMap::gap_left(std::size_t i) const { return i == 0 ? ExtSurd::neg_inf() : breaks_[i - 1]; }

ExtSurd MonoMap::gap_right(std::size_t i) const { return i == breaks_.size() ? ExtSurd::pos_inf() : breaks_[i]; }

ExtSurd MonoMap::gap_low(std::size_t i) const { return piece_limit(pieces_[i], gap_left(i), false); }

ExtSurd MonoMap::gap_high(std::size_t i) const { return piece_limit(pieces_[i], gap_right(i), true); }

ExtSurd MonoMap::left_limit(std::size_t j) const { return piece_limit(pieces_[j], breaks_[j], true); }

ExtSurd MonoMap::right_limit(std::size_t j) const { return piece_limit(pieces_[j + 1], breaks_[j], false); }

ExtSurd MonoMap::eval(const ExtSurd& x) const {
    if (x.is_neg_inf()) return piece_limit(pieces_.front(), x, false);
    if (x.is_pos_inf()) return piece_limit(pieces_.back(), x, true);
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t gap = static_cast<std::size_t>(it - breaks_.begin());
    if (it != breaks_.end() && *it == x) return values_[gap];
    return piece_eval(pieces_[gap], x);
}

bool MonoMap::is_step() const {
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [](const Piece& p) { return std::holds_alternative<ExtSurd>(p); });
}

std::string MonoMap::check() const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (const auto* f = std::get_if<FracLin>(&pieces_[i])) {
            if (pole_inside(*f, gap_left(i), gap_right(i)))
                return "pole inside piece " + std::to_string(i) + " (" + f->to_string() + ")";
        }
    }
    for (std::size_t j = 0; j < breaks_.size(); ++j) {
        if (!(left_limit(j) <= values_[j]) || !(values_[j] <= right_limit(j)))
            return "decreasing jump at breakpoint " + breaks_[j].to_string();
    }
    return "";
}

std::string MonoMap::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        out << "(" << gap_left(i).to_string() << ", " << gap_right(i).to_string() << "): "
            << piece_to_string(pieces_[i]);
        if (i < breaks_.size()) out << "; at " << breaks_[i].to_string() << ": " << values_[i].to_string() << "; ";
    }
    return out.str();
}

bool operator==(const MonoMap& a, const MonoMap& b) {
    if (a.breaks_.size() != b.breaks_.size()) return false;
    for (std::size_t j = 0; j < a.breaks_.size(); ++j)
        if (!(a.breaks_[j] == b.breaks_[j]) || !(a.values_[j] == b.values_[j])) return false;
    for (std::size_t i = 0; i < a.pieces_.size(); ++i)
        if (!piece_equal(a.pieces_[i], b.pieces_[i])) return false;
    return true;
}

MonoMap compose(const MonoMap& outer, const MonoMap& inner) {
    std::vector<ExtSurd> breaks, values;
    std::vector<Piece> pieces;
    const auto& ob = outer.breaks();
    auto outer_gap_from = [&](const ExtSurd& lo) {
        return static_cast<std::size_t>(std::upper_bound(ob.begin(), ob.end(), lo) - ob.begin());
    };
    for (std::size_t i = 0; i < inner.piece_count(); ++i) {
        if (i > 0) {
            breaks.push_back(inner.breaks()[i - 1]);
            values.push_back(outer.eval(inner.values()[i - 1]));
        }
        const Piece& p = inner.pieces()[i];
        if (const auto* k = std::get_if<ExtSurd>(&p)) {
            pieces.emplace_back(outer.eval(*k));
            continue;
        }
        const FracLin& g = std::get<FracLin>(p);
        ExtSurd lo = inner.gap_low(i), hi = inner.gap_high(i);
        std::size_t og = outer_gap_from(lo);
        FracLin ginv = fl_invert(g);
        auto emit = [&](std::size_t gap) {
            const Piece& q = outer.pieces()[gap];
            if (const auto* h = std::get_if<FracLin>(&q)) {
                pieces.emplace_back(fl_compose(*h, g));
            } else {
                pieces.push_back(q);
            }
        };
        emit(og);
        while (og < ob.size() && ob[og] < hi) {
            breaks.push_back(fl_apply(ginv, ob[og]));
            values.push_back(outer.values()[og]);
            ++og;
            emit(og);
        }
    }
    return MonoMap(std::move(breaks), std::move(values), std::move(pieces));
}

MonoMap envelope_min(const std::vector<MonoMap>& maps) {
    if (maps.empty()) throw std::invalid_argument("envelope_min: empty list");
    if (maps.size() == 1) return maps[0];
    std::vector<ExtSurd> cuts;
    for (const auto& m : maps) cuts.insert(cuts.end(), m.breaks().begin(), m.breaks().end());
    sort_unique(cuts);

    std::vector<ExtSurd> breaks, values;
    std::vector<Piece> pieces;
    auto value_at = [&](const ExtSurd& x) {
        ExtSurd best = maps[0].eval(x);
        for (std::size_t k = 1; k < maps.size(); ++k) best = min_of(best, maps[k].eval(x));
        return best;
    };
    std::vector<Piece> local;
    for (std::size_t chunk = 0; chunk <= cuts.size(); ++chunk) {
        ExtSurd l = chunk == 0 ? ExtSurd::neg_inf() : cuts[chunk - 1];
        ExtSurd r = chunk == cuts.size() ? ExtSurd::pos_inf() : cuts[chunk];
        if (chunk > 0) {
            breaks.push_back(l);
            values.push_back(value_at(l));
        }
        Rational probe = rational_between(l, r);
        local.clear();
        for (const auto& m : maps) {
            auto it = std::upper_bound(m.breaks().begin(), m.breaks().end(), ExtSurd(probe));
            local.push_back(m.pieces()[static_cast<std::size_t>(it - m.breaks().begin())]);
        }
        std::vector<ExtSurd> splits;
        for (std::size_t s = 0; s < local.size(); ++s) {
            for (std::size_t t = s + 1; t < local.size(); ++t) {
                const auto* f = std::get_if<FracLin>(&local[s]);
                const auto* g = std::get_if<FracLin>(&local[t]);
                if (f && g) {
                    if (*f == *g) continue;
                    for (auto& x : fl_intersections(*f, *g)) splits.push_back(x);
                } else if (f || g) {
                    const FracLin& h = f ? *f : *g;
                    const ExtSurd& k = f ? std::get<ExtSurd>(local[t]) : std::get<ExtSurd>(local[s]);
                    if (!k.is_finite()) continue;
                    if (h.c() != 0 && k == ExtSurd(make_rational(h.a(), h.c()))) continue;
                    splits.push_back(fl_apply(fl_invert(h), k));
                }
            }
        }
        std::erase_if(splits, [&](const ExtSurd& x) { return !(l < x && x < r); });
        sort_unique(splits);
        for (std::size_t sub = 0; sub <= splits.size(); ++sub) {
            ExtSurd sl = sub == 0 ? l : splits[sub - 1];
            ExtSurd sr = sub == splits.size() ? r : splits[sub];
            if (sub > 0) {
                breaks.push_back(sl);
                values.push_back(value_at(sl));
            }
            ExtSurd sample(rational_between(sl, sr));
            std::size_t best = 0;
            ExtSurd best_val = piece_eval(local[0], sample);
            for (std::size_t k = 1; k < local.size(); ++k) {
                ExtSurd v = piece_eval(local[k], sample);
                auto c = surd_cmp(v, best_val);
                bool better = c < 0;
                if (c == 0) {
                    const auto* f = std::get_if<FracLin>(&local[k]);
                    const auto* g = std::get_if<FracLin>(&local[best]);
                    better = f && g && lex_less(*f, *g);
                }
                if (better) {
                    best = k;
                    best_val = v;
                }
            }
            pieces.push_back(local[best]);
        }
    }
    return MonoMap(std::move(breaks), std::move(values), std::move(pieces));
}

bool Interval::empty() const {
    auto c = surd_cmp(lo, hi);
    if (c > 0) return true;
    if (c == 0) return !(lo.is_finite() && lo_closed && hi_closed);
    return false;
}

bool Interval::contains(const ExtSurd& x) const {
    if (!x.is_finite()) return false;
    auto a = surd_cmp(lo, x), b = surd_cmp(x, hi);
    bool left = a < 0 || (a == 0 && lo_closed);
    bool right = b < 0 || (b == 0 && hi_closed);
    return left && right;
}

std::string Interval::to_string() const {
    if (lo == hi && !empty()) return "{" + lo.to_string() + "}";
    return std::string(lo_closed && lo.is_finite() ? "[" : "(") + lo.to_string() + ", " + hi.to_string() +
           (hi_closed && hi.is_finite() ? "]" : ")");
}

std::vector<SignAtom> sign_partition(const MonoMap& m, bool against_negated) {
    auto line = [&](const ExtSurd& x) { return against_negated ? -x : x; };
    auto sign_at = [&](const ExtSurd& x, const ExtSurd& fx) {
        auto c = surd_cmp(fx, line(x));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    };
    std::vector<SignAtom> raw;
    for (std::size_t i = 0; i < m.piece_count(); ++i) {
        ExtSurd l = m.gap_left(i), r = m.gap_right(i);
        if (i > 0) raw.push_back({Interval::point(l), sign_at(l, m.values()[i - 1])});
        const Piece& p = m.pieces()[i];
        std::vector<ExtSurd> roots;
        if (const auto* f = std::get_if<FracLin>(&p)) {
            if (against_negated) {
                roots = solve_quadratic(f->c(), f->a() + f->d(), f->b());
            } else {
                roots = solve_quadratic(f->c(), f->d() - f->a(), -f->b());
            }
        } else {
            const ExtSurd& k = std::get<ExtSurd>(p);
            if (k.is_finite()) roots.push_back(line(k));
        }
        std::erase_if(roots, [&](const ExtSurd& x) { return !(l < x && x < r); });
        sort_unique(roots);
        for (std::size_t s = 0; s <= roots.size(); ++s) {
            ExtSurd sl = s == 0 ? l : roots[s - 1];
            ExtSurd sr = s == roots.size() ? r : roots[s];
            if (s > 0) raw.push_back({Interval::point(sl), sign_at(sl, piece_eval(p, sl))});
            ExtSurd sample(rational_between(sl, sr));
            raw.push_back({Interval::open(sl, sr), sign_at(sample, piece_eval(p, sample))});
        }
    }
    std::vector<SignAtom> out;
    for (auto& a : raw) {
        if (!out.empty() && out.back().sign == a.sign) {
            out.back().iv.hi = a.iv.hi;
            out.back().iv.hi_closed = a.iv.hi_closed;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

IntervalSet normalize(IntervalSet s) {
    for (auto& iv : s) {
        if (!iv.lo.is_finite()) iv.lo_closed = false;
        if (!iv.hi.is_finite()) iv.hi_closed = false;
    }
    std::erase_if(s, [](const Interval& iv) { return iv.empty(); });
    std::sort(s.begin(), s.end(), [](const Interval& a, const Interval& b) {
        auto c = surd_cmp(a.lo, b.lo);
        if (c != 0) return c < 0;
        return a.lo_closed && !b.lo_closed;
    });
    IntervalSet out;
    for (auto& iv : s) {
        if (!out.empty()) {
            Interval& last = out.back();
            auto c = surd_cmp(iv.lo, last.hi);
            if (c < 0 || (c == 0 && (last.hi_closed || iv.lo_closed))) {
                auto d = surd_cmp(iv.hi, last.hi);
                if (d > 0) {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                } else if (d == 0) {
                    last.hi_closed = last.hi_closed || iv.hi_closed;
                }
                continue;
            }
        }
        out.push_back(iv);
    }
    return out;
}

IntervalSet atoms_where(const std::vector<SignAtom>& atoms, bool (*pred)(int)) {
    IntervalSet s;
    for (const auto& a : atoms)
        if (pred(a.sign)) s.push_back(a.iv);
    return normalize(std::move(s));
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet s;
    for (const auto& x : a) {
        for (const auto& y : b) {
            Interval iv;
            auto c = surd_cmp(x.lo, y.lo);
            iv.lo = c >= 0 ? x.lo : y.lo;
            iv.lo_closed = c == 0 ? (x.lo_closed && y.lo_closed) : (c > 0 ? x.lo_closed : y.lo_closed);
            auto d = surd_cmp(x.hi, y.hi);
            iv.hi = d <= 0 ? x.hi : y.hi;
            iv.hi_closed = d == 0 ? (x.hi_closed && y.hi_closed) : (d < 0 ? x.hi_closed : y.hi_closed);
            s.push_back(iv);
        }
    }
    return normalize(std::move(s));
}

IntervalSet complement(const IntervalSet& set) {
    IntervalSet s = normalize(set);
    IntervalSet out;
    ExtSurd prev = ExtSurd::neg_inf();
    bool prev_closed = false;
    for (const auto& iv : s) {
        out.push_back({prev, iv.lo, !prev_closed, !iv.lo_closed});
        prev = iv.hi;
        prev_closed = iv.hi_closed;
    }
    out.push_back({prev, ExtSurd::pos_inf(), !prev_closed, false});
    return normalize(std::move(out));
}

bool contains(const IntervalSet& s, const ExtSurd& x) {
    return std::any_of(s.begin(), s.end(), [&](const Interval& iv) { return iv.contains(x); });
}

std::string to_string(const IntervalSet& s) {
    if (s.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += " u ";
        out += s[i].to_string();
    }
    return out;
}

}  // namespace m2sat
