#pragma once

#include <functional>
#include <span>

#include "dfkit/measure.hpp"

namespace dfkit {

struct OracleConfig {
    double abs_tol = 1e-11;
    double rel_tol = 1e-9;
    int max_intervals = 8000;
};

struct OracleResult {
    double price = 0.0;
    double error_estimate = 0.0;
};

/// Brute-force π(g) = ∫ g dF: exact atom sum plus adaptive quadrature of
/// g·density. Callers supply known breakpoints of g so quadrature cells never
/// straddle kinks or jumps.
OracleResult oracle_price(const Measure& measure, const std::function<double(double)>& g,
                          const OracleConfig& config = {},
                          std::span<const double> breakpoints = {});

}  // namespace dfkit
