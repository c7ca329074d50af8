#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace dfkit {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

class quadrature_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod 15(7) on a finite interval [a, b].
/// Breakpoints inside (a, b) force initial subdivisions so that cells never
/// straddle kinks of the integrand. Throws quadrature_error if the requested
/// tolerance cannot be met within the interval budget.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {},
                     std::span<const double> breakpoints = {});

}  // namespace dfkit
