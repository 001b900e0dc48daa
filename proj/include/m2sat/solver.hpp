#pragma once

// Decision procedure for two-variable monotone constraints: repeated pairwise
// composition (H rounds), loop replacement by f^inf, tight-path minima, the
// range and cross conditions, and witness extraction by fixing one variable at a time.

#include "m2sat/certify.hpp"
#include "m2sat/instance.hpp"

#include <optional>
#include <vector>

namespace m2sat {

/// Best known bound f[x][y] with x <= f(y), for one round. Absent entries mean no
/// constraint relates the pair yet.
struct HTable {
    std::size_t literals = 0;
    std::vector<std::optional<MonoMap>> f;

    explicit HTable(std::size_t L = 0) : literals(L), f(L * L) {}
    const std::optional<MonoMap>& at(Literal x, Literal y) const { return f[x.code() * literals + y.code()]; }
    std::optional<MonoMap>& at(Literal x, Literal y) { return f[x.code() * literals + y.code()]; }
    friend bool operator==(const HTable&, const HTable&) = default;
};

/// Round 0 folds parallel edges with min.
HTable h_initial(std::size_t literals, const std::vector<Constraint>& edges);
/// One round: min of the old entry and f[x][m] o f[m][y] for every m other than x, y.
HTable h_step(const HTable& t);

/// A node of the reachability graph: a literal with a loop and one of its
/// attracting values.
struct Node {
    Literal lit;
    ExtSurd value;
};

/// Everything needed to evaluate the tight-path minimum min_{x->y}.
struct MinTable {
    std::size_t literals = 0;
    std::vector<Constraint> edges;                          // constraints and their duals, deduplicated
    std::vector<std::pair<std::size_t, bool>> edge_source;  // (input constraint, dual) per edge
    std::vector<HTable> rounds;       // rounds.front() is round 0, rounds.back() the final table
    std::vector<std::optional<MonoMap>> loop_inf;  // per literal: f^inf of the final loop
    std::vector<std::optional<MonoMap>> outer;     // per literal: min(id, f^inf)
    std::vector<Node> nodes;
    std::vector<std::vector<std::size_t>> nodes_of;  // per literal, ascending value
    /// reach_next[t][s]: next node on a path from s to target t; npos when unreachable.
    std::vector<std::vector<std::size_t>> reach_next;
    /// reach_best[t][lit]: node of lit with least value that reaches t; npos when none.
    std::vector<std::vector<std::size_t>> reach_best;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    const std::optional<MonoMap>& final_at(Literal x, Literal y) const { return rounds.back().at(x, y); }
    std::size_t node_index(Literal lit, const ExtSurd& value) const;
};

/// Number of H rounds for n variables: ceil(log2 n + 1).
std::size_t round_count(std::size_t n);

MinTable build_min_table(const Instance& inst);

/// One elementary step of a tight path, listed in the order applied to the
/// starting value c at y (so the last step ends at x).
struct PathStep {
    bool loop = false;  // f^inf at `to` when true, otherwise the H edge from -> to
    Literal from, to;   // value moves from literal `to` to literal `from`
    ExtSurd in, out;
};

struct MinValue {
    ExtSurd value;
    std::vector<PathStep> path;
};

/// min over tight paths from x to y of their value at c, with an attaining path.
/// Absent pairs give +inf and an empty path.
MinValue eval_min(const MinTable& t, Literal x, Literal y, const ExtSurd& c);

/// The same minimum as a nondecreasing map of c.
MonoMap min_map(const MinTable& t, Literal x, Literal y);

struct Decision {
    bool sat = true;
    bool cross = false;  // which condition fired
    Literal x, y;        // range: min_{x->y}(max y) < min x; cross: the literal x
    ExtSurd value;       // range: the minimum; cross: the violating c
};

/// The two unsatisfiability conditions under the given ranges.
Decision decide(const MinTable& t, const std::vector<Range>& ranges);

/// Values c in range(v) consistent with all conditions after fixing v = c.
IntervalSet feasible_set(const MinTable& t, const std::vector<Range>& ranges, std::size_t v);

struct Verdict {
    bool sat = false;
    std::vector<Surd> witness;
    Certificate certificate;
    Decision decision;
};

Verdict solve(const Instance& inst);

/// Refutation transcript for a decision with sat == false. `inst` is the original
/// instance, which the transcript refers to.
Certificate emit_certificate(const Instance& inst, const MinTable& t, const Decision& d);

}  // namespace m2sat
