#include "m2sat/solver.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace m2sat {

namespace {

void fold_min(std::optional<MonoMap>& acc, MonoMap m) {
    if (!acc) {
        acc = std::move(m);
    } else if (!(*acc == m)) {
        acc = envelope_min(std::vector<MonoMap>{*acc, m});
    }
}

ExtSurd lit_lo(const std::vector<Range>& ranges, Literal x) {
    const Range& r = ranges[x.var()];
    return x.negated() ? ExtSurd(-r.hi) : ExtSurd(r.lo);
}

ExtSurd lit_hi(const std::vector<Range>& ranges, Literal x) {
    const Range& r = ranges[x.var()];
    return x.negated() ? ExtSurd(-r.lo) : ExtSurd(r.hi);
}

IntervalSet negate(const IntervalSet& s) {
    IntervalSet out;
    for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back({-it->hi, -it->lo, it->hi_closed, it->lo_closed});
    return out;
}

bool is_negative(int s) { return s < 0; }
bool is_nonnegative(int s) { return s >= 0; }

}  // namespace

std::size_t round_count(std::size_t n) {
    if (n <= 1) return 1;
    // ceil(log2 n + 1) = ceil(log2 n) + 1
    return static_cast<std::size_t>(std::bit_width(n - 1)) + 1;
}

HTable h_initial(std::size_t literals, const std::vector<Constraint>& edges) {
    HTable t(literals);
    for (const auto& e : edges) fold_min(t.at(e.lesser, e.greater), e.f.map());
    return t;
}

HTable h_step(const HTable& t) {
    const std::size_t L = t.literals;
    HTable out = t;
    for (std::size_t x = 0; x < L; ++x) {
        for (std::size_t y = 0; y < L; ++y) {
            Literal lx = Literal::from_code(x), ly = Literal::from_code(y);
            auto& acc = out.at(lx, ly);
            for (std::size_t m = 0; m < L; ++m) {
                if (m == x || m == y) continue;
                Literal lm = Literal::from_code(m);
                const auto& f = t.at(lx, lm);
                const auto& g = t.at(lm, ly);
                if (f && g) fold_min(acc, compose(*f, *g));
            }
        }
    }
    return out;
}

std::size_t MinTable::node_index(Literal lit, const ExtSurd& value) const {
    const auto& ids = nodes_of[lit.code()];
    auto it = std::lower_bound(ids.begin(), ids.end(), value,
                               [&](std::size_t id, const ExtSurd& v) { return nodes[id].value < v; });
    if (it == ids.end() || !(nodes[*it].value == value)) return npos;
    return *it;
}

MinTable build_min_table(const Instance& inst) {
    MinTable t;
    const std::size_t L = inst.literal_count();
    t.literals = L;
    for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
        for (bool dual : {false, true}) {
            Constraint c = dual ? dual_constraint(inst.constraints[i]) : inst.constraints[i];
            if (std::find(t.edges.begin(), t.edges.end(), c) != t.edges.end()) continue;
            t.edges.push_back(std::move(c));
            t.edge_source.emplace_back(i, dual);
        }
    }
    t.rounds.push_back(h_initial(L, t.edges));
    const std::size_t rounds = round_count(inst.var_count());
    for (std::size_t r = 0; r < rounds; ++r) {
        HTable next = h_step(t.rounds.back());
        if (next == t.rounds.back()) break;
        t.rounds.push_back(std::move(next));
    }

    t.loop_inf.resize(L);
    t.outer.resize(L);
    t.nodes_of.resize(L);
    for (std::size_t u = 0; u < L; ++u) {
        Literal lu = Literal::from_code(u);
        const auto& f = t.final_at(lu, lu);
        if (!f) continue;
        MonoMap inf = pfl_inf_power(pfl_from_map(*f));
        t.outer[u] = envelope_min(std::vector<MonoMap>{MonoMap::identity(), inf});
        for (const auto& v : step_values(inf)) {
            t.nodes_of[u].push_back(t.nodes.size());
            t.nodes.push_back({lu, v});
        }
        t.loop_inf[u] = std::move(inf);
    }

    // Edge (a, ca) -> (b, cb) when f^inf_a(f_{a->b}(cb)) = ca. Each node has at most
    // one predecessor per literal a.
    const std::size_t N = t.nodes.size();
    std::vector<std::vector<std::size_t>> preds(N);
    for (std::size_t k = 0; k < N; ++k) {
        Literal b = t.nodes[k].lit;
        for (std::size_t a = 0; a < L; ++a) {
            Literal la = Literal::from_code(a);
            if (la == b || !t.loop_inf[a]) continue;
            const auto& f = t.final_at(la, b);
            if (!f) continue;
            ExtSurd ca = t.loop_inf[a]->eval(f->eval(t.nodes[k].value));
            std::size_t p = t.node_index(la, ca);
            if (p == MinTable::npos) throw std::logic_error("loop value is not an attracting point");
            preds[k].push_back(p);
        }
    }
    t.reach_next.assign(N, std::vector<std::size_t>(N, MinTable::npos));
    t.reach_best.assign(N, std::vector<std::size_t>(L, MinTable::npos));
    for (std::size_t target = 0; target < N; ++target) {
        auto& next = t.reach_next[target];
        next[target] = target;
        std::deque<std::size_t> queue{target};
        while (!queue.empty()) {
            std::size_t k = queue.front();
            queue.pop_front();
            for (std::size_t p : preds[k]) {
                if (next[p] != MinTable::npos) continue;
                next[p] = k;
                queue.push_back(p);
            }
        }
        for (std::size_t u = 0; u < L; ++u) {
            for (std::size_t id : t.nodes_of[u]) {
                if (next[id] != MinTable::npos) {
                    t.reach_best[target][u] = id;
                    break;
                }
            }
        }
    }
    return t;
}

namespace {

// Steps taking value at node `target` back to node `source` along the reach graph.
void append_graph_path(const MinTable& t, std::size_t source, std::size_t target, std::vector<PathStep>& path) {
    std::vector<std::size_t> chain{source};
    while (chain.back() != target) chain.push_back(t.reach_next[target][chain.back()]);
    for (std::size_t k = chain.size() - 1; k > 0; --k) {
        const Node& to = t.nodes[chain[k]];
        const Node& from = t.nodes[chain[k - 1]];
        ExtSurd mid = t.final_at(from.lit, to.lit)->eval(to.value);
        path.push_back({false, from.lit, to.lit, to.value, mid});
        path.push_back({true, from.lit, from.lit, mid, from.value});
    }
}

}  // namespace

MinValue eval_min(const MinTable& t, Literal x, Literal y, const ExtSurd& c) {
    MinValue best{ExtSurd::pos_inf(), {}};
    bool found = false;
    auto offer = [&](const ExtSurd& v, auto&& build) {
        if (found && !(v < best.value)) return;
        found = true;
        best.value = v;
        best.path.clear();
        build(best.path);
    };

    if (x != y) {
        if (const auto& f = t.final_at(x, y)) {
            ExtSurd v = f->eval(c);
            offer(v, [&](auto& p) { p.push_back({false, x, y, c, v}); });
        }
    } else if (const auto& l = t.loop_inf[x.code()]) {
        ExtSurd v = l->eval(c);
        offer(v, [&](auto& p) { p.push_back({true, x, x, c, v}); });
    }

    for (std::size_t w = 0; w < t.literals; ++w) {
        Literal lw = Literal::from_code(w);
        if (!t.loop_inf[w]) continue;
        ExtSurd e = c;
        if (lw != y) {
            const auto& f = t.final_at(lw, y);
            if (!f) continue;
            e = f->eval(c);
        }
        ExtSurd d = t.loop_inf[w]->eval(e);
        std::size_t target = t.node_index(lw, d);
        for (std::size_t z = 0; z < t.literals; ++z) {
            Literal lz = Literal::from_code(z);
            std::size_t s = t.reach_best[target][z];
            if (s == MinTable::npos) continue;
            const ExtSurd& cz = t.nodes[s].value;
            ExtSurd v = cz;
            if (lz != x) {
                const auto& f = t.final_at(x, lz);
                if (!f) continue;
                v = f->eval(cz);
            }
            offer(v, [&](auto& p) {
                if (lw != y) p.push_back({false, lw, y, c, e});
                p.push_back({true, lw, lw, e, d});
                append_graph_path(t, s, target, p);
                if (lz != x) p.push_back({false, x, lz, cz, v});
            });
        }
    }

    if (found) {
        if (const auto& l = t.loop_inf[x.code()]) {
            ExtSurd v = l->eval(best.value);
            if (v < best.value) {
                best.path.push_back({true, x, x, best.value, v});
                best.value = v;
            }
        }
    }
    return best;
}

MonoMap min_map(const MinTable& t, Literal x, Literal y) {
    // The trailing loop at x is applied per term: a term that is absent must stay +inf.
    const auto& outer = t.outer[x.code()];
    std::optional<MonoMap> acc;
    if (x != y) {
        if (const auto& f = t.final_at(x, y)) acc = outer ? compose(*outer, *f) : *f;
    } else if (const auto& l = t.loop_inf[x.code()]) {
        acc = *l;
    }
    for (std::size_t w = 0; w < t.literals; ++w) {
        Literal lw = Literal::from_code(w);
        if (!t.loop_inf[w]) continue;
        MonoMap step = *t.loop_inf[w];
        if (lw != y) {
            const auto& f = t.final_at(lw, y);
            if (!f) continue;
            step = compose(step, *f);
        }
        auto label = [&](const ExtSurd& d) {
            std::size_t target = t.node_index(lw, d);
            ExtSurd out = ExtSurd::pos_inf();
            for (std::size_t z = 0; z < t.literals; ++z) {
                Literal lz = Literal::from_code(z);
                std::size_t s = t.reach_best[target][z];
                if (s == MinTable::npos) continue;
                ExtSurd v = t.nodes[s].value;
                if (lz != x) {
                    const auto& f = t.final_at(x, lz);
                    if (!f) continue;
                    v = f->eval(v);
                }
                if (outer) v = outer->eval(v);
                out = min_of(out, v);
            }
            return out;
        };
        fold_min(acc, step.relabel(label));
    }
    if (!acc) return MonoMap::constant(ExtSurd::pos_inf());
    return *acc;
}

namespace {

// {c : min_{x->-x}(-c) < c} and {c : min_{-x->x}(c) < -c}.
std::pair<IntervalSet, IntervalSet> cross_sets(const MinTable& t, Literal x) {
    IntervalSet s1 = negate(atoms_where(sign_partition(min_map(t, x, -x), true), is_negative));
    IntervalSet s2 = atoms_where(sign_partition(min_map(t, -x, x), true), is_negative);
    return {s1, s2};
}

IntervalSet closed_range(const ExtSurd& lo, const ExtSurd& hi) {
    if (hi < lo) return {};
    return {Interval{lo, hi, lo.is_finite(), hi.is_finite()}};
}

}  // namespace

Decision decide(const MinTable& t, const std::vector<Range>& ranges) {
    Decision d;
    for (std::size_t x = 0; x < t.literals; ++x) {
        for (std::size_t y = 0; y < t.literals; ++y) {
            Literal lx = Literal::from_code(x), ly = Literal::from_code(y);
            ExtSurd v = eval_min(t, lx, ly, lit_hi(ranges, ly)).value;
            if (v < lit_lo(ranges, lx)) {
                d.sat = false;
                d.x = lx;
                d.y = ly;
                d.value = v;
                return d;
            }
        }
    }
    for (std::size_t v = 0; v < ranges.size(); ++v) {
        Literal x(v, false);
        auto [s1, s2] = cross_sets(t, x);
        IntervalSet bad = intersect(intersect(s1, s2), closed_range(ranges[v].lo, ranges[v].hi));
        if (bad.empty()) continue;
        const Interval& iv = bad.front();
        d.sat = false;
        d.cross = true;
        d.x = x;
        d.y = -x;
        d.value = iv.lo < iv.hi ? ExtSurd(rational_between(iv.lo, iv.hi)) : iv.lo;
        return d;
    }
    return d;
}

IntervalSet feasible_set(const MinTable& t, const std::vector<Range>& ranges, std::size_t v) {
    Literal p(v, false), n(v, true);
    IntervalSet s = closed_range(ranges[v].lo, ranges[v].hi);
    for (std::size_t y = 0; y < t.literals && !s.empty(); ++y) {
        Literal ly = Literal::from_code(y);
        if (ly.var() == v) continue;
        ExtSurd hi = lit_hi(ranges, ly);
        ExtSurd a = eval_min(t, p, ly, hi).value;
        ExtSurd b = eval_min(t, n, ly, hi).value;
        s = intersect(s, closed_range(-b, a));
    }
    if (s.empty()) return s;
    auto [s1, s2] = cross_sets(t, p);
    s = intersect(s, complement(s1));
    s = intersect(s, complement(s2));
    if (s.empty()) return s;
    s = intersect(s, atoms_where(sign_partition(min_map(t, p, p), false), is_nonnegative));
    return s;
}

Verdict solve(const Instance& inst) {
    validate_instance(inst);
    Verdict out;
    MinTable t = build_min_table(inst);
    std::vector<Range> ranges = inst.ranges;
    out.decision = decide(t, ranges);
    if (!out.decision.sat) {
        out.certificate = emit_certificate(inst, t, out.decision);
        return out;
    }
    out.sat = true;
    for (std::size_t v = 0; v < inst.var_count(); ++v) {
        IntervalSet s = feasible_set(t, ranges, v);
        if (s.empty()) throw std::logic_error("empty feasible set for " + inst.names[v]);
        const Interval& last = s.back();
        Surd c = last.hi_closed && last.hi.is_finite() ? last.hi.value()
                 : last.lo < last.hi                   ? Surd(rational_between(last.lo, last.hi))
                                                       : last.lo.value();
        ranges[v] = {c, c};
        out.witness.push_back(c);
    }
    return out;
}

}  // namespace m2sat
