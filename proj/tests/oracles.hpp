#pragma once

// Brute-force reference computations over explicit paths, independent of the
// reachability graph used by the solver.

#include "m2sat/solver.hpp"

#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace m2sat::testing {

/// Calls visit(value) for every non-repeating path from x to y in the symmetrized
/// instance, with value = p(c). A path may return to x only as its last vertex.
inline void for_each_simple_path(const Instance& inst, Literal x, Literal y, const ExtSurd& c,
                                 const std::function<void(const ExtSurd&)>& visit) {
    const Instance sym = symmetrize(inst);
    std::vector<std::vector<const Constraint*>> out(inst.literal_count());
    for (const auto& e : sym.constraints) out[e.greater.code()].push_back(&e);
    // Walk backwards from y: the value at the current literal is known.
    std::vector<bool> seen(inst.literal_count(), false);
    std::function<void(Literal, const ExtSurd&)> walk = [&](Literal at, const ExtSurd& v) {
        for (const Constraint* e : out[at.code()]) {
            ExtSurd w = pfl_eval(e->f, v);
            if (e->lesser == x) visit(w);
            if (e->lesser == x || seen[e->lesser.code()] || e->lesser == y) continue;
            seen[e->lesser.code()] = true;
            walk(e->lesser, w);
            seen[e->lesser.code()] = false;
        }
    };
    seen[y.code()] = true;
    walk(y, c);
}

/// Minimum over all non-empty tight paths of V from x to y at c: loops and non-loop
/// edges alternate. Explores (literal, value, last step) states until none are new;
/// values after a loop are attracting values, so the state set is finite.
inline std::optional<ExtSurd> tight_path_min(const MinTable& t, Literal x, Literal y, const ExtSurd& c) {
    using State = std::tuple<std::size_t, ExtSurd, int>;  // literal, value, 0 start / 1 edge / 2 loop
    std::set<State> seen;
    std::vector<State> todo{{y.code(), c, 0}};
    std::optional<ExtSurd> best;
    auto push = [&](std::size_t lit, const ExtSurd& v, int kind) {
        if (lit == x.code() && (!best || v < *best)) best = v;
        State s{lit, v, kind};
        if (seen.insert(s).second) todo.push_back(s);
    };
    while (!todo.empty()) {
        auto [lit, v, kind] = todo.back();
        todo.pop_back();
        if (kind != 2 && t.loop_inf[lit]) push(lit, t.loop_inf[lit]->eval(v), 2);
        if (kind != 1)
            for (std::size_t u = 0; u < t.literals; ++u) {
                if (u == lit) continue;
                const auto& f = t.final_at(Literal::from_code(u), Literal::from_code(lit));
                if (f) push(u, f->eval(v), 1);
            }
    }
    return best;
}

}  // namespace m2sat::testing
