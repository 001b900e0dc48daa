#include "doctest.h"
#include "m2sat/certify.hpp"
#include "m2sat/fixtures.hpp"
#include "m2sat/gen.hpp"
#include "m2sat/solver.hpp"
#include "mutate.hpp"
#include "support.hpp"

using namespace m2sat;
using namespace m2sat::testing;

namespace {

using Op = CertStep::Op;

const Surd kRoot2 = Surd::make(0, 1, 2);

CertStep use(std::size_t c, bool dual = false) {
    CertStep s;
    s.op = Op::Use;
    s.constraint = c;
    s.dual = dual;
    return s;
}

CertStep bound(Op op, Literal x, ExtSurd v = {}) {
    CertStep s;
    s.op = op;
    s.literal = x;
    s.value = std::move(v);
    return s;
}

CertStep apply(std::size_t fact, std::size_t b, ExtSurd v) {
    CertStep s;
    s.op = Op::Apply;
    s.args = {fact, b};
    s.value = std::move(v);
    return s;
}

CertStep range_violation(std::size_t b, ExtSurd v, ExtSurd lo) {
    CertStep s;
    s.op = Op::RangeViolation;
    s.args = {b};
    s.value = std::move(v);
    s.bound2 = std::move(lo);
    return s;
}

// x in [0, 1] with x <= -x - 1 and -x <= x - 1.
Instance squeezed() {
    Instance inst;
    inst.names = {"x"};
    inst.ranges = {{Surd(0), Surd(1)}};
    Literal x(0, false);
    inst.constraints = {{x, -x, pfl_affine(1, -1)}, {-x, x, pfl_affine(1, -1)}};
    return inst;
}

Certificate squeezed_cross(const Rational& c) {
    Literal x(0, false);
    CertStep cross = bound(Op::CrossViolation, x, c);
    cross.args = {3, 5};
    return {{use(0), use(1), bound(Op::Assume, -x, Rational(-c)), apply(0, 2, Rational(-c - 1)), bound(Op::Assume, x, c),
             apply(1, 4, Rational(c - 1)), cross}};
}

}  // namespace

TEST_CASE("witness checks") {
    Instance inst = sqrt2_pair_instance();
    CHECK(verify_sat(inst, {kRoot2}));
    CHECK_FALSE(verify_sat(inst, {Surd(2)}));
    CHECK_FALSE(verify_sat(inst, {Surd::make(0, 1, 3)}));
    CHECK_FALSE(verify_sat(inst, {}));
    CheckResult r = verify_sat(inst, {Surd(3)});
    CHECK_FALSE(r);
    CHECK(r.reason.find("outside its range") != std::string::npos);
    CHECK(verify_sat(three_guard_instance(), {kRoot2, kRoot2, kRoot2}));
    CHECK_FALSE(verify_sat(three_guard_instance(), {Surd(1), Surd(1), Surd(1)}));
}

TEST_CASE("hand-written range refutation") {
    Instance inst = shifted_range_instance();
    Literal x(0, false), y(1, false);
    Certificate good{{use(0), bound(Op::Range, y), apply(0, 1, ExtSurd(-4)), range_violation(2, ExtSurd(-4), ExtSurd(1))}};
    CHECK(verify_unsat(inst, good));

    Certificate wrong_value = good;
    wrong_value.steps[2].value = ExtSurd(-5);
    CHECK_FALSE(verify_unsat(inst, wrong_value));

    Certificate assumed = good;
    assumed.steps[1] = bound(Op::Assume, y, ExtSurd(1));
    CheckResult r = verify_unsat(inst, assumed);
    CHECK_FALSE(r);
    CHECK(r.reason.find("assumption") != std::string::npos);

    Certificate wrong_literal = good;
    wrong_literal.steps[1].literal = x;
    CHECK_FALSE(verify_unsat(inst, wrong_literal));

    Certificate no_conclusion = good;
    no_conclusion.steps.pop_back();
    CHECK_FALSE(verify_unsat(inst, no_conclusion));

    Certificate forward_ref = good;
    forward_ref.steps[2].args = {3, 1};
    CHECK_FALSE(verify_unsat(inst, forward_ref));

    CHECK_FALSE(verify_unsat(inst, Certificate{}));
}

TEST_CASE("hand-written cross refutation") {
    Instance inst = squeezed();
    CHECK(verify_unsat(inst, squeezed_cross(0)));
    CHECK(verify_unsat(inst, squeezed_cross(Rational(1, 4))));
    // At c = 1/2 the second chain only reaches -x <= -1/2, which is not below -c.
    CHECK_FALSE(verify_unsat(inst, squeezed_cross(Rational(1, 2))));
    // c outside range(x).
    CHECK_FALSE(verify_unsat(inst, squeezed_cross(-1)));

    Certificate swapped = squeezed_cross(0);
    std::swap(swapped.steps.back().args[0], swapped.steps.back().args[1]);
    CHECK_FALSE(verify_unsat(inst, swapped));
}

TEST_CASE("loop closing") {
    // x, y in [2, 3], x <= g(y), y <= x where g pulls everything above sqrt 2 down to it.
    Instance inst;
    inst.names = {"x", "y"};
    inst.ranges = {{Surd(2), Surd(3)}, {Surd(2), Surd(3)}};
    Literal x(0, false), y(1, false);
    inst.constraints = {{x, y, pfl_clamp_extend(FracLin(2, 2, 1, 2), 0, 4)}, {y, x, PFL::identity()}};

    CertStep loop;
    loop.op = Op::Compose;
    loop.args = {0, 1};
    CertStep close;
    close.op = Op::LoopClose;
    close.args = {2, 3};
    close.bound2 = ExtSurd(3);
    close.fixed = ExtSurd(kRoot2);
    Certificate good{{use(0), use(1), loop, bound(Op::Range, x), close, range_violation(4, ExtSurd(kRoot2), ExtSurd(2))}};
    CHECK(verify_unsat(inst, good));

    Certificate not_fixed = good;
    not_fixed.steps[4].fixed = ExtSurd(1);
    not_fixed.steps[5].value = ExtSurd(1);
    CHECK_FALSE(verify_unsat(inst, not_fixed));

    // Jumping past the fixed point to -inf is not allowed.
    Certificate too_far = good;
    too_far.steps[4].fixed = ExtSurd::neg_inf();
    too_far.steps[5].value = ExtSurd::neg_inf();
    CHECK_FALSE(verify_unsat(inst, too_far));

    Certificate wrong_entry = good;
    wrong_entry.steps[4].bound2 = ExtSurd(2);
    CHECK_FALSE(verify_unsat(inst, wrong_entry));

    Verdict v = solve(inst);
    REQUIRE_FALSE(v.sat);
    CHECK(verify_unsat(inst, v.certificate));
}

TEST_CASE("op names round trip") {
    for (auto op : {Op::Use, Op::Compose, Op::Min, Op::Range, Op::Assume, Op::Apply, Op::LoopClose, Op::RangeViolation,
                    Op::CrossViolation}) {
        REQUIRE(op_from_name(op_name(op)).has_value());
        CHECK(*op_from_name(op_name(op)) == op);
    }
    CHECK_FALSE(op_from_name("resolve").has_value());
}

TEST_CASE("mutated verdicts are rejected or harmless") {
    std::mt19937_64 rng(7);
    std::size_t total = 0, rejected = 0, equivalent = 0;
    for (std::uint64_t seed = 0; total < 120; ++seed) {
        GenOptions o;
        o.n = 2 + seed % 3;
        Instance inst = generate_instance(seed, o);
        Verdict v = solve(inst);
        for (int k = 0; k < 4; ++k) {
            Mutant m = mutate(rng, inst, v);
            ++total;
            CheckResult r = m.verdict.sat ? verify_sat(inst, m.verdict.witness) : verify_unsat(inst, m.verdict.certificate);
            if (!r) {
                ++rejected;
            } else {
                INFO("seed " << seed << " kind " << m.kind);
                bool harmless = !triage(inst, m).empty();
                CHECK(harmless);
                equivalent += harmless ? 1 : 0;
            }
        }
    }
    MESSAGE("rejected " << rejected << " of " << total << ", " << equivalent << " accepted mutants still valid");
    CHECK(rejected + equivalent == total);
}
