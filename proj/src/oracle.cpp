#include "m2sat/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace m2sat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NumericPFL {
    std::vector<double> breaks;
    std::vector<std::array<double, 4>> pieces;

    double operator()(double x) const {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
        const auto& k = pieces[i];
        if (std::isinf(x)) return k[2] == 0 ? (k[0] > 0 ? x : -x) : k[0] / k[2];
        return (k[0] * x + k[1]) / (k[2] * x + k[3]);
    }
};

struct Edge {
    Literal lesser, greater;
    NumericPFL f;
};

NumericPFL to_numeric(const PFL& f) {
    NumericPFL out;
    for (const auto& b : f.breaks()) out.breaks.push_back(b.to_double());
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const FracLin& g = f.piece(i);
        out.pieces.push_back({g.a().get_d(), g.b().get_d(), g.c().get_d(), g.d().get_d()});
    }
    return out;
}

struct Box {
    std::vector<double> lo, hi;

    double upper(Literal x) const { return x.negated() ? -lo[x.var()] : hi[x.var()]; }
    double value(Literal x) const { return x.negated() ? -lo[x.var()] : lo[x.var()]; }
    bool lower_upper(Literal x, double h) {
        if (x.negated()) {
            if (-h <= lo[x.var()]) return false;
            lo[x.var()] = -h;
        } else {
            if (h >= hi[x.var()]) return false;
            hi[x.var()] = h;
        }
        return true;
    }
    double violation() const {
        double v = -kInf;
        for (std::size_t i = 0; i < lo.size(); ++i) v = std::max(v, lo[i] - hi[i]);
        return v;
    }
};

enum class Outcome { Consistent, Empty, NoConvergence };

class Search {
public:
    Search(const Instance& inst, const OracleOptions& opts) : inst_(inst), opts_(opts) {
        for (const auto& c : symmetrize(inst).constraints) edges_.push_back({c.lesser, c.greater, to_numeric(c.f)});
    }

    // Narrows upper bounds to a fixpoint; on Empty, `violation` is how far the box is empty.
    Outcome propagate(Box& box, double& violation) {
        for (std::size_t iter = 0; iter < opts_.max_iterations; ++iter) {
            bool changed = false;
            for (const auto& e : edges_) {
                double h = e.f(box.upper(e.greater));
                double cur = box.upper(e.lesser);
                if (h < cur - 1e-13 * (1 + std::fabs(h)) && box.lower_upper(e.lesser, h)) changed = true;
            }
            violation = box.violation();
            if (violation > opts_.tolerance || std::isnan(violation)) return Outcome::Empty;
            if (!changed) return violation > 0 ? Outcome::Empty : Outcome::Consistent;
        }
        violation = box.violation();
        return violation > opts_.tolerance ? Outcome::Empty : Outcome::NoConvergence;
    }

    bool run(Box box, std::size_t v, OracleResult& out) {
        if (v == inst_.var_count()) {
            out.assignment = box.lo;
            return true;
        }
        double lo = box.lo[v], hi = box.hi[v];
        std::vector<double> cands{(lo + hi) / 2};
        for (std::size_t k = 0; k <= opts_.grid; ++k) cands.push_back(lo + (hi - lo) * static_cast<double>(k) / opts_.grid);
        std::vector<double> viol(cands.size(), kInf);
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (try_value(box, v, cands[i], viol[i], out)) return true;
            if (nodes_ > opts_.max_nodes) return false;
        }
        // Refine around the least-violated grid point in case the feasible part is
        // narrower than the grid spacing.
        std::size_t best = static_cast<std::size_t>(std::min_element(viol.begin() + 1, viol.end()) - viol.begin());
        if (!std::isfinite(viol[best]) || viol[best] <= 0) return false;
        double a = cands[std::max<std::size_t>(best, 2) - 1], b = cands[std::min(best + 1, cands.size() - 1)];
        const double g = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 40 && b - a > 1e-12; ++it) {
            double c1 = b - g * (b - a), c2 = a + g * (b - a), v1 = kInf, v2 = kInf;
            if (try_value(box, v, c1, v1, out) || try_value(box, v, c2, v2, out)) return true;
            if (nodes_ > opts_.max_nodes) return false;
            if (v1 < v2) {
                b = c2;
            } else {
                a = c1;
            }
        }
        return false;
    }

    std::size_t nodes_ = 0;
    double least_violation_ = kInf;
    bool unsettled_ = false;

private:
    bool try_value(const Box& box, std::size_t v, double c, double& violation, OracleResult& out) {
        ++nodes_;
        Box b = box;
        b.lo[v] = b.hi[v] = c;
        Outcome o = propagate(b, violation);
        if (o == Outcome::NoConvergence) {
            unsettled_ = true;
            violation = 0;
            return false;
        }
        if (o == Outcome::Empty) {
            least_violation_ = std::min(least_violation_, violation);
            return false;
        }
        violation = 0;
        return run(std::move(b), v + 1, out);
    }

    const Instance& inst_;
    const OracleOptions& opts_;
    std::vector<Edge> edges_;
};

}  // namespace

const char* oracle_verdict_name(OracleVerdict v) {
    switch (v) {
    case OracleVerdict::Sat: return "SAT";
    case OracleVerdict::Unsat: return "UNSAT";
    case OracleVerdict::Marginal: return "MARGINAL";
    }
    return "?";
}

OracleResult numeric_oracle(const Instance& inst, const OracleOptions& opts) {
    OracleResult out;
    Search s(inst, opts);
    Box box;
    for (const auto& r : inst.ranges) {
        box.lo.push_back(r.lo.to_double());
        box.hi.push_back(r.hi.to_double());
    }
    double violation = 0;
    switch (s.propagate(box, violation)) {
    case Outcome::Empty:
        if (violation > opts.tolerance) {
            out.verdict = OracleVerdict::Unsat;
            return out;
        }
        out.note = "ranges empty only within tolerance";
        return out;
    case Outcome::NoConvergence:
        out.note = "narrowing did not converge";
        return out;
    case Outcome::Consistent:
        break;
    }
    if (s.run(box, 0, out)) {
        double slack = kInf;
        for (std::size_t v = 0; v < inst.var_count(); ++v)
            slack = std::min({slack, out.assignment[v] - box.lo[v], box.hi[v] - out.assignment[v]});
        auto value = [&](Literal x) { return x.negated() ? -out.assignment[x.var()] : out.assignment[x.var()]; };
        for (const auto& c : inst.constraints) slack = std::min(slack, to_numeric(c.f)(value(c.greater)) - value(c.lesser));
        // Range slack is measured against the narrowed box, so only constraint slack can be
        // negative here; a tight assignment can still be the only one.
        if (slack < -opts.tolerance) {
            out.note = "assignment violates a constraint";
        } else {
            out.verdict = OracleVerdict::Sat;
            if (slack < opts.tolerance) {
                out.verdict = OracleVerdict::Marginal;
                out.note = "assignment is tight within tolerance";
            }
        }
        return out;
    }
    if (s.nodes_ > opts.max_nodes) {
        out.note = "search budget exhausted";
    } else if (s.unsettled_) {
        out.note = "narrowing did not converge";
    } else if (s.least_violation_ <= opts.tolerance) {
        out.note = "violation within tolerance";
    } else {
        out.verdict = OracleVerdict::Unsat;
    }
    return out;
}

}  // namespace m2sat
