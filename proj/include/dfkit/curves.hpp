#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dfkit/measure.hpp"

namespace dfkit {

enum class OptionRole { Put, Call };

/// Option price curve on a sorted strike grid. Off-grid evaluation is
/// piecewise-linear unless a closed-form evaluator is attached. F(inf) and the
/// mean travel as metadata (bond price and forward are quoted, not inferred).
struct PriceCurve {
    OptionRole role = OptionRole::Put;
    std::vector<double> strikes;
    std::vector<double> values;
    std::function<double(double)> evaluator;  // optional
    std::optional<double> f_infinity;
    std::optional<double> mean;
    /// Curves built from signed density approximations need not satisfy the
    /// convexity/monotonicity invariants; they are flagged non-coherent.
    bool coherent = true;

    double value(double k) const;
    void validate_grid() const;
};

PriceCurve put_curve(const Measure& measure, std::vector<double> strikes);
PriceCurve call_curve(const Measure& measure, std::vector<double> strikes);

/// Per-strike residual of C(k) - P(k) + k F(inf) - mean; zero for consistent
/// curve pairs.
std::vector<double> parity_gap(const PriceCurve& put, const PriceCurve& call,
                               double f_infinity, double mean);

/// D+ of the curve at k. Grid-backed curves use the forward difference to the
/// next grid point; evaluator-backed curves shrink the forward step with a
/// consistency check. For put curves this estimates F(k), for call curves
/// F(k) - F(inf).
double right_derivative(const PriceCurve& curve, double k);

/// D- of the curve at k (backward difference). For a call curve at or below
/// the first strike this is -F(inf), taken from metadata.
double left_derivative(const PriceCurve& curve, double k);

/// Black-Scholes put with zero rates and dividends.
double bs_put(double s0, double k, double t, double sigma);
double bs_call(double s0, double k, double t, double sigma);

/// Implied volatility of a put by bisection on [1e-9, 5]. The price must lie
/// in the no-arbitrage band [(k-s0)^+, k).
double implied_vol(double price, double s0, double k, double t);

}  // namespace dfkit
