#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dfkit/curves.hpp"
#include "dfkit/portfolio.hpp"

namespace dfkit {

/// Difference-of-convex payoff encoded by its value and right slope at 0 plus
/// the curvature measure on (0, inf):
///   g(x) = g0 + slope0·x + ∫_(0,inf) (x-k)^+ dν(k).
/// The curvature is positive exactly when the payoff is convex.
struct DCPayoff {
    double g0 = 0.0;
    double slope0 = 0.0;
    StieltjesMeasure curvature;
    std::function<double(double)> evaluator;  // optional closed form, for testing

    double value(double x) const;       // evaluator if present, else reconstruction
    double reconstruction(double x) const;
    double right_slope(double x) const;  // slope0 + ν((0, x])
    bool is_convex() const { return curvature.is_positive(); }
};

/// Strips the affine part: returns ((g0, slope0), payoff with both zeroed).
std::pair<std::array<double, 2>, DCPayoff> normalize_dc(const DCPayoff& payoff);

struct PricingOptions {
    QuadOptions quad{};
    /// Truncation budget for curvature mass beyond the curve span.
    double tail_budget = 1e-6;
};

struct PriceBreakdown {
    double value = 0.0;
    double tail_bound = 0.0;  // C(cut) times curvature variation past the cut
    double cut = 0.0;         // strike where the ∫ C dν integration stopped
};

/// Convex pricing formula: ∫ g dF = g0·F(inf) + slope0·mean + ∫_(0,inf) C dν.
/// Requires the curve's F(inf)/mean metadata and a positive curvature.
PriceBreakdown price_convex(const PriceCurve& call, const DCPayoff& payoff,
                            const PricingOptions& opts = {});

/// Same with signed ν: decomposes ν = ν+ - ν- and differences the integrals.
PriceBreakdown price_dc(const PriceCurve& call, const DCPayoff& payoff,
                        const PricingOptions& opts = {});

/// One DC piece on [lo, hi) (hi may be +inf) with boundary data; the left
/// limits are derived from the reconstruction when built via make_piece.
struct DCPiece {
    double lo = 0.0;
    double hi = kInf;
    double g_lo = 0.0;        // g(lo)
    double slope_lo = 0.0;    // D+g(lo)
    StieltjesMeasure curvature;  // on (lo, hi)
    double g_hi_minus = 0.0;     // g(hi-)
    double slope_hi_minus = 0.0; // D+g(hi-)
    std::function<double(double)> evaluator;  // optional

    double value(double x) const;  // 0 outside [lo, hi)
};

DCPiece make_piece(double lo, double hi, double g_lo, double slope_lo,
                   StieltjesMeasure curvature,
                   std::function<double(double)> evaluator = {});

struct PiecewiseDCPayoff {
    std::vector<DCPiece> pieces;  // disjoint, ascending

    void validate() const;
    double value(double x) const;
};

/// Piecewise-DC pricing with boundary and atom terms: per piece [a, b),
///   ∫_[a,b) g dF = ∫_(a,b) C dν + C(a) D+g(a) - D+C(a) g(a)
///                  - C(b) D+g(b-) + D-C(b) g(b-) + g(a)·(D+C(a) - D-C(a)).
/// Breakpoints must be grid points of (or evaluable on) the call curve.
PriceBreakdown price_piecewise_dc(const PriceCurve& call, const PiecewiseDCPayoff& payoff,
                                  const PricingOptions& opts = {});

/// Monotone call-portfolio approximant of a normalized convex payoff: dyadic
/// partition of (0, n] into 2^n cells, quantity ν((k_i, k_{i+1}]) at strike
/// k_{i+1}. The portfolio payoff undershoots g pointwise and its price
/// increases with the level.
Portfolio dyadic_call_portfolio(const DCPayoff& payoff, int level);

struct TailDecayRow {
    double a;
    double payoff_tail;  // g(a) (F(inf) - F(a))
    double slope_tail;   // C(a) D+g(a)
};

std::vector<TailDecayRow> tail_decay_report(const Measure& measure, const DCPayoff& payoff,
                                            std::span<const double> a_grid);

/// Tabulates a C^2 payoff's curvature by central second differences on the
/// given grid. Approximate by construction; the measures themselves are the
/// first-class inputs.
TableDensity curvature_from_evaluator(const std::function<double(double)>& g,
                                      std::span<const double> grid);

}  // namespace dfkit
