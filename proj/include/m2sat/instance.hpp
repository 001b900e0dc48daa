#pragma once

// Instances: variables with compact ranges and constraints lesser <= f(greater).

#include "m2sat/pfl.hpp"

#include <string>
#include <utility>
#include <vector>

namespace m2sat {

/// A variable or its negation, packed as var * 2 + negated.
class Literal {
public:
    Literal() = default;
    Literal(std::size_t var, bool negated) : code_(var * 2 + (negated ? 1 : 0)) {}
    static Literal from_code(std::size_t code) { return Literal(code / 2, code % 2 == 1); }

    std::size_t var() const { return code_ / 2; }
    bool negated() const { return code_ % 2 == 1; }
    std::size_t code() const { return code_; }
    Literal operator-() const { return from_code(code_ ^ 1U); }

    friend auto operator<=>(const Literal&, const Literal&) = default;

private:
    std::size_t code_ = 0;
};

/// lesser <= f(greater).
struct Constraint {
    Literal lesser;
    Literal greater;
    PFL f;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Range {
    Surd lo, hi;
    friend bool operator==(const Range&, const Range&) = default;
};

struct Instance {
    std::vector<std::string> names;
    std::vector<Range> ranges;
    std::vector<Constraint> constraints;

    std::size_t var_count() const { return ranges.size(); }
    std::size_t literal_count() const { return 2 * ranges.size(); }
    /// range(-v) = -range(v).
    Range range(Literal x) const;
    std::string literal_name(Literal x) const;
    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Throws ValidationError on empty ranges, unknown variables or duplicate names.
void validate_instance(const Instance& inst);

/// The dual constraint -greater <= dual(f)(-lesser).
Constraint dual_constraint(const Constraint& c);

/// Appends the dual of every constraint whose dual is not already present.
Instance symmetrize(const Instance& inst);

/// Largest bit length over all range endpoints and constraint coefficients.
std::size_t instance_bits(const Instance& inst);

/// True when value lies in [lo, hi].
bool in_range(const Range& r, const Surd& value);

}  // namespace m2sat
