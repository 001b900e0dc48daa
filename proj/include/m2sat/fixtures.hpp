#pragma once

// Small reference instances with known answers.

#include "m2sat/instance.hpp"

namespace m2sat {

/// h restricted to {u in [lo, hi] : h(u) in [vlo, vhi]} on the branch of h that
/// contains `anchor`, extended by slope-1 lines. Throws ValidationError when that
/// set is empty or h is not increasing there.
PFL restrict_extend(const FracLin& h, const Rational& lo, const Rational& hi, const Rational& vlo,
                    const Rational& vhi, const Rational& anchor);

/// x in [0,2], x <= (x+2)/(x+1) and x <= (x-2)/(-x+1), written as x <= F(-x).
/// The unique maximal solution is sqrt 2 with both constraints tight.
Instance sqrt2_pair_instance();

/// x, y, z in [0,2] with x <= z, z <= y, y <= (4x+2)/(x+4), y <= (4x-2)/(-x+4).
/// The only solution is x = y = z = sqrt 2.
Instance three_guard_instance();

/// x in [1,2], y in [0,1], x <= y - 5. Unsatisfiable by a range violation.
Instance shifted_range_instance();

}  // namespace m2sat
