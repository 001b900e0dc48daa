#pragma once

// Random corruptions of verdicts for checker robustness tests, and an independent
// triage of corruptions the checker accepts.

#include "m2sat/oracle.hpp"
#include "m2sat/solver.hpp"
#include "support.hpp"

#include <random>
#include <string>
#include <vector>

namespace m2sat::testing {

struct Mutant {
    Verdict verdict;
    std::string kind;
};

inline Surd shifted(const Surd& s, const Rational& d) { return Surd::make(s.p() + d, s.q(), s.r()); }

inline Rational tiny(std::mt19937_64& rng) {
    return Rational(Integer(1), Integer(1) << static_cast<unsigned long>(uniform(rng, 1, 30)));
}

inline Surd nudge(std::mt19937_64& rng, const Surd& s) {
    Rational eps = tiny(rng);
    return shifted(s, uniform(rng, 0, 1) ? eps : Rational(-eps));
}

inline ExtSurd nudge(std::mt19937_64& rng, const ExtSurd& x) {
    if (!x.is_finite()) return ExtSurd(Surd(uniform(rng, -5, 5)));
    return ExtSurd(nudge(rng, x.value()));
}

inline Mutant mutate_witness(std::mt19937_64& rng, const Instance& inst, Verdict v) {
    std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(v.witness.size()) - 1));
    Surd& w = v.witness[i];
    switch (uniform(rng, 0, 4)) {
    case 0: w = shifted(w, tiny(rng)); return {v, "witness_raise"};
    case 1: w = nudge(rng, w); return {v, "witness_nudge"};
    case 2: w = -w; return {v, "witness_negate"};
    case 3: {
        const Range& r = inst.ranges[i];
        // Generated ranges are rational.
        w = Surd(Rational(r.lo.p() + (r.hi.p() - r.lo.p()) * Rational(uniform(rng, 0, 64), 64)));
        return {v, "witness_resample"};
    }
    default:
        v.witness.erase(v.witness.begin() + static_cast<long>(i));
        return {v, "witness_drop"};
    }
}

inline Mutant mutate_certificate(std::mt19937_64& rng, const Instance& inst, Verdict v) {
    auto& steps = v.certificate.steps;
    std::size_t s = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(steps.size()) - 1));
    CertStep& st = steps[s];
    using Op = CertStep::Op;
    for (int attempt = 0; attempt < 16; ++attempt) {
        switch (uniform(rng, 0, 7)) {
        case 0:
            if (st.op == Op::Assume || st.op == Op::Apply || st.op == Op::RangeViolation || st.op == Op::CrossViolation) {
                st.value = nudge(rng, st.value);
                return {v, "value_nudge"};
            }
            break;
        case 1:
            if (st.op == Op::LoopClose) {
                if (uniform(rng, 0, 1)) {
                    st.fixed = nudge(rng, st.fixed);
                } else {
                    st.bound2 = nudge(rng, st.bound2);
                }
                return {v, "loop_nudge"};
            }
            if (st.op == Op::RangeViolation) {
                st.bound2 = nudge(rng, st.bound2);
                return {v, "minimum_nudge"};
            }
            break;
        case 2:
            if (!st.args.empty() && s > 0) {
                std::size_t k = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(st.args.size()) - 1));
                std::size_t to = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(s) - 1));
                if (to != st.args[k]) {
                    st.args[k] = to;
                    return {v, "retarget"};
                }
            }
            break;
        case 3:
            if (st.op == Op::Use && inst.constraints.size() > 1) {
                std::size_t to = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(inst.constraints.size()) - 1));
                if (to != st.constraint) {
                    st.constraint = to;
                    return {v, "constraint_swap"};
                }
            }
            break;
        case 4:
            if (st.op == Op::Use) {
                st.dual = !st.dual;
                return {v, "dual_flip"};
            }
            break;
        case 5:
            if (st.op == Op::Range || st.op == Op::Assume || st.op == Op::CrossViolation) {
                st.literal = -st.literal;
                return {v, "literal_negate"};
            }
            break;
        case 6: {
            steps.erase(steps.begin() + static_cast<long>(s));
            for (auto& later : steps)
                for (auto& a : later.args)
                    if (a > s) --a;
            return {v, "drop_step"};
        }
        default: {
            auto op = static_cast<Op>(uniform(rng, 0, 8));
            if (op != st.op) {
                st.op = op;
                return {v, "op_change"};
            }
            break;
        }
        }
    }
    steps.pop_back();
    return {v, "truncate"};
}

inline Mutant mutate(std::mt19937_64& rng, const Instance& inst, const Verdict& v) {
    return v.sat ? mutate_witness(rng, inst, v) : mutate_certificate(rng, inst, v);
}

/// Why an accepted mutant is harmless, or "" when it is not. A SAT mutant must satisfy
/// every range and constraint under 512-bit evaluation; an UNSAT mutant must belong to
/// an instance that the numeric oracle does not find satisfiable.
inline std::string triage(const Instance& inst, const Mutant& m) {
    if (m.verdict.sat) {
        if (m.verdict.witness.size() != inst.var_count()) return "";
        const BigFloat slack(mpf_class("1e-100", kOraclePrecision));
        for (std::size_t i = 0; i < inst.var_count(); ++i) {
            BigFloat w = to_big(m.verdict.witness[i]);
            if (w < to_big(inst.ranges[i].lo) - slack || w > to_big(inst.ranges[i].hi) + slack) return "";
        }
        for (const auto& c : inst.constraints) {
            const Surd& g = m.verdict.witness[c.greater.var()];
            const Surd& l = m.verdict.witness[c.lesser.var()];
            ExtSurd fy = pfl_eval(c.f, ExtSurd(c.greater.negated() ? -g : g));
            if (!fy.is_finite()) continue;
            BigFloat lhs = to_big(c.lesser.negated() ? -l : l);
            if (lhs > to_big(fy.value()) + slack) return "";
        }
        return "mutated witness still satisfies the instance (" + m.kind + ")";
    }
    if (numeric_oracle(inst).verdict == OracleVerdict::Sat) return "";
    return "instance remains unsatisfiable; mutation kept a valid refutation (" + m.kind + ")";
}

}  // namespace m2sat::testing
