#pragma once

// Independent checking of witnesses and refutation transcripts. Relies only on exact
// evaluation, composition, minimum and fixed-point enumeration.

#include "m2sat/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace m2sat {

/// One transcript step. Steps either derive a constraint ("fact") or a one-sided
/// bound "literal <= value" ("bound"), or close the refutation.
///
///   use(constraint, dual)          fact: an input constraint or its dual
///   compose(args[0], args[1])      fact: x <= f(g(z)) from x <= f(y), y <= g(z)
///   min(args...)                   fact: x <= min_i f_i(y), all facts from x to y
///   range(literal)                 bound: literal <= max range(literal)
///   assume(literal, value)         bound: hypothesis literal <= value
///   apply(fact, bound, value)      bound: x <= f(v) from x <= f(y) and y <= v
///   loop_close(fact, bound, fixed, entry)
///                                  bound: u <= fixed from u <= l(u) and u <= entry,
///                                  where l(t) < t on (fixed, entry]
///   range_violation(bound, value, min)
///                                  bound rooted at a range fact ends at x <= value < min range(x)
///   cross_violation(literal, c, bounds[2])
///                                  from -x <= -c derive x <= vA < c, and
///                                  from x <= c derive -x <= vB < -c
struct CertStep {
    enum class Op { Use, Compose, Min, Range, Assume, Apply, LoopClose, RangeViolation, CrossViolation };
    Op op = Op::Use;
    std::size_t constraint = 0;
    bool dual = false;
    std::vector<std::size_t> args;  // compose/min operands; apply/loop_close: {fact, bound}; violations: bounds
    Literal literal;
    ExtSurd value;   // assume, apply, range_violation (value), cross_violation (c)
    ExtSurd bound2;  // loop_close entry, range_violation min
    ExtSurd fixed;   // loop_close
    friend bool operator==(const CertStep&, const CertStep&) = default;
};

struct Certificate {
    std::vector<CertStep> steps;
    friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct CheckResult {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Exact check of ranges and of every constraint at the assignment.
CheckResult verify_sat(const Instance& inst, const std::vector<Surd>& witness);

/// Replays the transcript and checks the final violation exactly.
CheckResult verify_unsat(const Instance& inst, const Certificate& cert);

const char* op_name(CertStep::Op op);
std::optional<CertStep::Op> op_from_name(const std::string& name);

}  // namespace m2sat
