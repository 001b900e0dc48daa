#include "m2sat/solver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace m2sat {

namespace {

class Emitter {
public:
    explicit Emitter(const MinTable& t) : t_(t) {}

    Certificate take() { return std::move(cert_); }

    std::size_t push(CertStep st) {
        cert_.steps.push_back(std::move(st));
        return cert_.steps.size() - 1;
    }

    // Edge indices of a path x -> ... -> y of input edges whose composition attains
    // round r's entry at point c.
    std::vector<std::size_t> trace(std::size_t r, Literal x, Literal y, const ExtSurd& c) const {
        const auto& entry = t_.rounds[r].at(x, y);
        if (!entry) throw std::logic_error("trace through an absent entry");
        ExtSurd target = entry->eval(c);
        if (r == 0) {
            for (std::size_t i = 0; i < t_.edges.size(); ++i) {
                const Constraint& e = t_.edges[i];
                if (e.lesser == x && e.greater == y && pfl_eval(e.f, c) == target) return {i};
            }
            throw std::logic_error("no input edge attains the round-0 value");
        }
        const HTable& prev = t_.rounds[r - 1];
        if (const auto& old = prev.at(x, y); old && old->eval(c) == target) return trace(r - 1, x, y, c);
        for (std::size_t m = 0; m < t_.literals; ++m) {
            Literal lm = Literal::from_code(m);
            if (lm == x || lm == y) continue;
            const auto& f = prev.at(x, lm);
            const auto& g = prev.at(lm, y);
            if (!f || !g) continue;
            ExtSurd mid = g->eval(c);
            if (!(f->eval(mid) == target)) continue;
            auto left = trace(r - 1, x, lm, mid);
            auto right = trace(r - 1, lm, y, c);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
        throw std::logic_error("no candidate attains the table value");
    }

    std::size_t use(std::size_t edge) {
        auto it = use_steps_.find(edge);
        if (it != use_steps_.end()) return it->second;
        CertStep st;
        st.op = CertStep::Op::Use;
        st.constraint = t_.edge_source[edge].first;
        st.dual = t_.edge_source[edge].second;
        std::size_t k = push(st);
        use_steps_[edge] = k;
        return k;
    }

    // Applies an edge path (listed from the lesser end) to bound step `bound`.
    std::size_t apply_path(const std::vector<std::size_t>& path, std::size_t bound, ExtSurd& value) {
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            value = pfl_eval(t_.edges[*it].f, value);
            CertStep st;
            st.op = CertStep::Op::Apply;
            st.args = {use(*it), bound};
            st.value = value;
            bound = push(st);
        }
        return bound;
    }

    // Fact step for the composition of an edge path.
    std::pair<std::size_t, PFL> compose_path(const std::vector<std::size_t>& path) {
        std::size_t k = use(path[0]);
        PFL f = t_.edges[path[0]].f;
        for (std::size_t i = 1; i < path.size(); ++i) {
            CertStep st;
            st.op = CertStep::Op::Compose;
            st.args = {k, use(path[i])};
            k = push(st);
            f = pfl_compose(f, t_.edges[path[i]].f);
        }
        return {k, f};
    }

    static bool closes(const PFL& l, const ExtSurd& d, const ExtSurd& c0, ExtSurd* bad) {
        if (!(pfl_eval(l, c0) < c0)) {
            *bad = c0;
            return false;
        }
        if (d.is_finite() && !(pfl_eval(l, d) == d)) {
            *bad = d;
            return false;
        }
        for (const auto& a : sign_partition(l.map(), false)) {
            if (a.sign < 0) continue;
            const Interval& iv = a.iv;
            ExtSurd lo = max_of(iv.lo, d), hi = min_of(iv.hi, c0);
            if (hi < lo) continue;
            if (lo < hi) {
                *bad = ExtSurd(rational_between(lo, hi));
                return false;
            }
            if (iv.contains(lo) && d < lo) {  // isolated point of (d, c0]
                *bad = lo;
                return false;
            }
        }
        return true;
    }

    // Closes the loop at u when f^inf_u lowers the bound; returns the new bound step.
    std::size_t loop(Literal u, std::size_t bound, ExtSurd& value) {
        const ExtSurd c0 = value;
        const ExtSurd d = t_.loop_inf[u.code()]->eval(c0);
        if (!(d < c0)) return bound;
        const std::size_t r = t_.rounds.size() - 1;
        std::vector<std::vector<std::size_t>> paths;
        std::vector<ExtSurd> points{c0};
        if (d.is_finite()) points.push_back(d);
        for (std::size_t iter = 0; iter < 256; ++iter) {
            for (const auto& p : points) {
                auto path = trace(r, u, u, p);
                if (std::find(paths.begin(), paths.end(), path) == paths.end()) paths.push_back(std::move(path));
            }
            points.clear();
            std::vector<PFL> fs;
            for (const auto& path : paths) {
                PFL f = t_.edges[path[0]].f;
                for (std::size_t i = 1; i < path.size(); ++i) f = pfl_compose(f, t_.edges[path[i]].f);
                fs.push_back(f);
            }
            PFL l = fs.size() == 1 ? fs[0] : pfl_min(fs);
            ExtSurd bad;
            if (closes(l, d, c0, &bad)) {
                std::vector<std::size_t> facts;
                for (const auto& path : paths) facts.push_back(compose_path(path).first);
                std::size_t fact = facts[0];
                if (facts.size() > 1) {
                    CertStep st;
                    st.op = CertStep::Op::Min;
                    st.args = facts;
                    fact = push(st);
                }
                CertStep st;
                st.op = CertStep::Op::LoopClose;
                st.args = {fact, bound};
                st.fixed = d;
                st.bound2 = c0;
                value = d;
                return push(st);
            }
            points.push_back(bad);
        }
        throw std::logic_error("loop function could not be rebuilt from traced paths");
    }

    // Replays a tight path from the bound step; returns the final bound step.
    std::size_t follow(const std::vector<PathStep>& path, std::size_t bound, ExtSurd& value) {
        const std::size_t r = t_.rounds.size() - 1;
        for (const auto& s : path) {
            if (s.loop) {
                bound = loop(s.to, bound, value);
            } else {
                bound = apply_path(trace(r, s.from, s.to, value), bound, value);
            }
        }
        return bound;
    }

private:
    const MinTable& t_;
    Certificate cert_;
    std::map<std::size_t, std::size_t> use_steps_;
};

}  // namespace

Certificate emit_certificate(const Instance& inst, const MinTable& t, const Decision& d) {
    if (d.sat) throw std::invalid_argument("no refutation for a satisfiable decision");
    Emitter em(t);
    if (!d.cross) {
        CertStep start;
        start.op = CertStep::Op::Range;
        start.literal = d.y;
        std::size_t b = em.push(start);
        ExtSurd value(inst.range(d.y).hi);
        MinValue mv = eval_min(t, d.x, d.y, value);
        b = em.follow(mv.path, b, value);
        CertStep end;
        end.op = CertStep::Op::RangeViolation;
        end.args = {b};
        end.value = value;
        end.bound2 = ExtSurd(inst.range(d.x).lo);
        em.push(end);
        return em.take();
    }
    Literal x = d.x;
    const ExtSurd& c = d.value;
    CertStep a0;
    a0.op = CertStep::Op::Assume;
    a0.literal = -x;
    a0.value = -c;
    std::size_t a = em.push(a0);
    ExtSurd va = -c;
    a = em.follow(eval_min(t, x, -x, va).path, a, va);
    CertStep b0;
    b0.op = CertStep::Op::Assume;
    b0.literal = x;
    b0.value = c;
    std::size_t b = em.push(b0);
    ExtSurd vb = c;
    b = em.follow(eval_min(t, -x, x, vb).path, b, vb);
    CertStep end;
    end.op = CertStep::Op::CrossViolation;
    end.literal = x;
    end.value = c;
    end.args = {a, b};
    em.push(end);
    return em.take();
}

}  // namespace m2sat
