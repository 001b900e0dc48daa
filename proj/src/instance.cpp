#include "m2sat/instance.hpp"

#include <algorithm>
#include <set>

namespace m2sat {

Range Instance::range(Literal x) const {
    const Range& r = ranges.at(x.var());
    if (!x.negated()) return r;
    return {-r.hi, -r.lo};
}

std::string Instance::literal_name(Literal x) const {
    std::string base = x.var() < names.size() ? names[x.var()] : "v" + std::to_string(x.var());
    return x.negated() ? "-" + base : base;
}

void validate_instance(const Instance& inst) {
    if (inst.names.size() != inst.ranges.size()) throw ValidationError("names and ranges differ in length");
    std::set<std::string> seen;
    for (std::size_t v = 0; v < inst.names.size(); ++v) {
        const std::string& name = inst.names[v];
        if (name.empty() || name[0] == '-') throw ValidationError("invalid variable name '" + name + "'");
        if (!seen.insert(name).second) throw ValidationError("duplicate variable name '" + name + "'");
        if (inst.ranges[v].hi < inst.ranges[v].lo) throw ValidationError("empty range for variable '" + name + "'");
    }
    for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
        const Constraint& c = inst.constraints[i];
        if (c.lesser.var() >= inst.var_count() || c.greater.var() >= inst.var_count())
            throw ValidationError("constraint " + std::to_string(i) + " refers to an unknown variable");
    }
}

Constraint dual_constraint(const Constraint& c) { return {-c.greater, -c.lesser, pfl_dual(c.f)}; }

Instance symmetrize(const Instance& inst) {
    Instance out = inst;
    for (const auto& c : inst.constraints) {
        Constraint d = dual_constraint(c);
        if (std::find(out.constraints.begin(), out.constraints.end(), d) == out.constraints.end())
            out.constraints.push_back(std::move(d));
    }
    return out;
}

std::size_t instance_bits(const Instance& inst) {
    std::size_t b = 0;
    for (const auto& r : inst.ranges) b = std::max({b, r.lo.bits(), r.hi.bits()});
    for (const auto& c : inst.constraints) b = std::max(b, c.f.bits());
    return b;
}

bool in_range(const Range& r, const Surd& value) { return r.lo <= value && value <= r.hi; }

}  // namespace m2sat
