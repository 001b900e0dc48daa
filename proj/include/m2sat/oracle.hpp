#pragma once

// Floating-point differential oracle. Advisory only: used to cross-check the exact
// solver in tests, never to decide anything.

#include "m2sat/instance.hpp"

#include <string>
#include <vector>

namespace m2sat {

enum class OracleVerdict { Sat, Unsat, Marginal };

const char* oracle_verdict_name(OracleVerdict v);

struct OracleOptions {
    double tolerance = 1e-6;
    std::size_t max_iterations = 1000;  // narrowing rounds per propagation
    std::size_t grid = 48;              // candidate values per variable
    std::size_t max_nodes = 4000;       // search nodes before giving up as marginal
};

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::Marginal;
    std::vector<double> assignment;  // for Sat
    std::string note;                // why the verdict is marginal
};

/// Iterated bound narrowing plus a grid search that fixes variables in order.
OracleResult numeric_oracle(const Instance& inst, const OracleOptions& opts = {});

}  // namespace m2sat
