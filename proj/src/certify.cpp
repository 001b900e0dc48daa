#include "m2sat/certify.hpp"

#include <array>
#include <variant>

namespace m2sat {

namespace {

struct Fact {
    Literal lesser, greater;
    PFL f;
};

struct Bound {
    Literal literal;
    ExtSurd value;
    bool assumed = false;  // rooted at an assume step rather than a range
    Literal root;
    ExtSurd root_value;
};

using Derived = std::variant<std::monostate, Fact, Bound>;

CheckResult fail(std::size_t step, const std::string& why) {
    return {false, "step " + std::to_string(step) + ": " + why};
}

// True when some t in (lo, hi) satisfies l(t) = t, or l is the identity on part of it.
bool fixed_point_inside(const PFL& l, const ExtSurd& lo, const ExtSurd& hi) {
    const auto& br = l.breaks();
    for (std::size_t i = 0; i < l.piece_count(); ++i) {
        ExtSurd left = i == 0 ? ExtSurd::neg_inf() : br[i - 1];
        ExtSurd right = i == br.size() ? ExtSurd::pos_inf() : br[i];
        ExtSurd a = max_of(left, lo), b = min_of(right, hi);
        if (!(a < b) && !(a == b && a.is_finite())) continue;
        FixedPoints fp = fl_fixed_points(l.piece(i));
        if (fp.all) {
            if (a < b) return true;
            continue;
        }
        for (const auto& r : fp.roots)
            if (lo < r && r < hi && a <= r && r <= b) return true;
    }
    return false;
}

}  // namespace

const char* op_name(CertStep::Op op) {
    switch (op) {
    case CertStep::Op::Use: return "use";
    case CertStep::Op::Compose: return "compose";
    case CertStep::Op::Min: return "min";
    case CertStep::Op::Range: return "range";
    case CertStep::Op::Assume: return "assume";
    case CertStep::Op::Apply: return "apply";
    case CertStep::Op::LoopClose: return "loop_close";
    case CertStep::Op::RangeViolation: return "range_violation";
    case CertStep::Op::CrossViolation: return "cross_violation";
    }
    return "?";
}

std::optional<CertStep::Op> op_from_name(const std::string& name) {
    for (auto op : {CertStep::Op::Use, CertStep::Op::Compose, CertStep::Op::Min, CertStep::Op::Range,
                    CertStep::Op::Assume, CertStep::Op::Apply, CertStep::Op::LoopClose,
                    CertStep::Op::RangeViolation, CertStep::Op::CrossViolation})
        if (name == op_name(op)) return op;
    return std::nullopt;
}

CheckResult verify_sat(const Instance& inst, const std::vector<Surd>& witness) {
    if (witness.size() != inst.var_count())
        return {false, "witness has " + std::to_string(witness.size()) + " values for " +
                           std::to_string(inst.var_count()) + " variables"};
    for (std::size_t v = 0; v < witness.size(); ++v)
        if (!in_range(inst.ranges[v], witness[v]))
            return {false, "variable " + inst.names[v] + " = " + witness[v].to_string() + " is outside its range"};
    auto value = [&](Literal x) { return x.negated() ? -witness[x.var()] : witness[x.var()]; };
    for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
        const Constraint& c = inst.constraints[i];
        ExtSurd lhs = value(c.lesser), rhs = pfl_eval(c.f, value(c.greater));
        if (rhs < lhs)
            return {false, "constraint " + std::to_string(i) + " violated: " + lhs.to_string() + " > " +
                               rhs.to_string()};
    }
    return {};
}

CheckResult verify_unsat(const Instance& inst, const Certificate& cert) {
    if (cert.steps.empty()) return {false, "empty certificate"};
    std::vector<Derived> out(cert.steps.size());
    auto fact_at = [&](std::size_t here, std::size_t k) -> const Fact* {
        return k < here ? std::get_if<Fact>(&out[k]) : nullptr;
    };
    auto bound_at = [&](std::size_t here, std::size_t k) -> const Bound* {
        return k < here ? std::get_if<Bound>(&out[k]) : nullptr;
    };
    auto literal_ok = [&](Literal x) { return x.var() < inst.var_count(); };

    for (std::size_t s = 0; s < cert.steps.size(); ++s) {
        const CertStep& st = cert.steps[s];
        bool last = s + 1 == cert.steps.size();
        bool closing = st.op == CertStep::Op::RangeViolation || st.op == CertStep::Op::CrossViolation;
        if (closing != last) return fail(s, last ? "certificate does not end in a violation" : "violation before the end");
        try {
            switch (st.op) {
            case CertStep::Op::Use: {
                if (st.constraint >= inst.constraints.size()) return fail(s, "unknown constraint");
                const Constraint& c = inst.constraints[st.constraint];
                if (st.dual) {
                    Constraint d = dual_constraint(c);
                    out[s] = Fact{d.lesser, d.greater, d.f};
                } else {
                    out[s] = Fact{c.lesser, c.greater, c.f};
                }
                break;
            }
            case CertStep::Op::Compose: {
                if (st.args.size() != 2) return fail(s, "compose needs two operands");
                const Fact* f = fact_at(s, st.args[0]);
                const Fact* g = fact_at(s, st.args[1]);
                if (!f || !g) return fail(s, "compose operand is not an earlier fact");
                if (f->greater != g->lesser) return fail(s, "compose operands do not chain");
                out[s] = Fact{f->lesser, g->greater, pfl_compose(f->f, g->f)};
                break;
            }
            case CertStep::Op::Min: {
                if (st.args.empty()) return fail(s, "min needs operands");
                std::vector<PFL> fs;
                const Fact* first = fact_at(s, st.args[0]);
                if (!first) return fail(s, "min operand is not an earlier fact");
                for (std::size_t k : st.args) {
                    const Fact* f = fact_at(s, k);
                    if (!f) return fail(s, "min operand is not an earlier fact");
                    if (f->lesser != first->lesser || f->greater != first->greater)
                        return fail(s, "min operands relate different literals");
                    fs.push_back(f->f);
                }
                out[s] = Fact{first->lesser, first->greater, pfl_min(fs)};
                break;
            }
            case CertStep::Op::Range: {
                if (!literal_ok(st.literal)) return fail(s, "unknown literal");
                ExtSurd hi(inst.range(st.literal).hi);
                out[s] = Bound{st.literal, hi, false, st.literal, hi};
                break;
            }
            case CertStep::Op::Assume: {
                if (!literal_ok(st.literal)) return fail(s, "unknown literal");
                if (!st.value.is_finite()) return fail(s, "assumption must be finite");
                out[s] = Bound{st.literal, st.value, true, st.literal, st.value};
                break;
            }
            case CertStep::Op::Apply: {
                if (st.args.size() != 2) return fail(s, "apply needs a fact and a bound");
                const Fact* f = fact_at(s, st.args[0]);
                const Bound* b = bound_at(s, st.args[1]);
                if (!f || !b) return fail(s, "apply operands are not an earlier fact and bound");
                if (f->greater != b->literal) return fail(s, "apply literal mismatch");
                ExtSurd v = pfl_eval(f->f, b->value);
                if (!(v == st.value)) return fail(s, "recorded value " + st.value.to_string() + " != " + v.to_string());
                Bound nb = *b;
                nb.literal = f->lesser;
                nb.value = v;
                out[s] = nb;
                break;
            }
            case CertStep::Op::LoopClose: {
                if (st.args.size() != 2) return fail(s, "loop_close needs a fact and a bound");
                const Fact* f = fact_at(s, st.args[0]);
                const Bound* b = bound_at(s, st.args[1]);
                if (!f || !b) return fail(s, "loop_close operands are not an earlier fact and bound");
                if (f->lesser != f->greater || f->greater != b->literal) return fail(s, "loop_close needs a loop at the bound literal");
                if (!(st.bound2 == b->value)) return fail(s, "entry value differs from the bound");
                const ExtSurd& c0 = b->value;
                if (!c0.is_finite()) return fail(s, "entry value must be finite");
                if (st.fixed.is_pos_inf() || !(st.fixed < c0)) return fail(s, "fixed point must lie below the entry");
                if (!(pfl_eval(f->f, c0) < c0)) return fail(s, "loop does not decrease the entry value");
                if (st.fixed.is_finite() && !(pfl_eval(f->f, st.fixed) == st.fixed))
                    return fail(s, "claimed fixed point is not fixed");
                if (fixed_point_inside(f->f, st.fixed, c0)) return fail(s, "loop has a fixed point between fixed and entry");
                Bound nb = *b;
                nb.value = st.fixed;
                out[s] = nb;
                break;
            }
            case CertStep::Op::RangeViolation: {
                if (st.args.size() != 1) return fail(s, "range_violation needs one bound");
                const Bound* b = bound_at(s, st.args[0]);
                if (!b) return fail(s, "range_violation operand is not an earlier bound");
                if (b->assumed) return fail(s, "range_violation bound rests on an assumption");
                if (!(b->value == st.value)) return fail(s, "recorded value differs from the bound");
                ExtSurd lo(inst.range(b->literal).lo);
                if (!(st.bound2 == lo)) return fail(s, "recorded minimum differs from the range");
                if (!(b->value < lo)) return fail(s, "bound " + b->value.to_string() + " does not violate the range");
                break;
            }
            case CertStep::Op::CrossViolation: {
                if (st.args.size() != 2) return fail(s, "cross_violation needs two bounds");
                if (!literal_ok(st.literal)) return fail(s, "unknown literal");
                if (!st.value.is_finite()) return fail(s, "c must be finite");
                Literal x = st.literal;
                const ExtSurd& c = st.value;
                Range r = inst.range(x);
                if (c < ExtSurd(r.lo) || ExtSurd(r.hi) < c) return fail(s, "c lies outside the range");
                const Bound* a = bound_at(s, st.args[0]);
                const Bound* b = bound_at(s, st.args[1]);
                if (!a || !b) return fail(s, "cross_violation operands are not earlier bounds");
                if (!a->assumed || a->root != -x || !(a->root_value == -c) || a->literal != x)
                    return fail(s, "first chain must lead from -x <= -c to x");
                if (!b->assumed || b->root != x || !(b->root_value == c) || b->literal != -x)
                    return fail(s, "second chain must lead from x <= c to -x");
                if (!(a->value < c)) return fail(s, "first chain does not force x below c");
                if (!(b->value < -c)) return fail(s, "second chain does not force -x below -c");
                break;
            }
            }
        } catch (const std::exception& e) {
            return fail(s, e.what());
        }
    }
    return {};
}

}  // namespace m2sat
