#include "dfkit/static_replication.hpp"

#include <algorithm>
#include <cmath>

namespace dfkit {
namespace {

// Call value read off a curve of either role (parity flip for put curves).
double call_at(const PriceCurve& curve, double k) {
    double v = curve.value(k);
    if (curve.role == OptionRole::Put) {
        if (!curve.f_infinity || !curve.mean)
            throw validation_error("call_at: put curve needs F(inf)/mean metadata for parity");
        v += *curve.mean - k * *curve.f_infinity;
    }
    return v;
}

// D+ / D- of the call curve; for a put curve these differ by -F(inf).
double dplus_call(const PriceCurve& curve, double k) {
    double d = right_derivative(curve, k);
    if (curve.role == OptionRole::Put) {
        if (!curve.f_infinity) throw validation_error("dplus_call: missing F(inf) metadata");
        d -= *curve.f_infinity;
    }
    return d;
}

double dminus_call(const PriceCurve& curve, double k) {
    double d = left_derivative(curve, k);
    if (curve.role == OptionRole::Put) {
        if (!curve.f_infinity) throw validation_error("dminus_call: missing F(inf) metadata");
        d -= *curve.f_infinity;
    }
    return d;
}

std::vector<double> strikes_within(const PriceCurve& curve, double lo, double hi) {
    std::vector<double> out;
    for (double k : curve.strikes)
        if (k > lo && k < hi) out.push_back(k);
    return out;
}

// ∫ C dν over (lo, hi∧cut) for a *positive* ν, with the truncation policy for
// hi = inf: evaluator curves push the cut out until C is negligible, grid
// curves stop at the last strike. The dropped tail is bounded (heuristically,
// since ν((cut,inf)) may be infinite) by C(cut)·ν((cut, 4 cut]).
PriceBreakdown positive_curvature_integral(const PriceCurve& curve, const StieltjesMeasure& nu,
                                           double lo, double hi, bool closed_hi,
                                           const PricingOptions& opts) {
    PriceBreakdown out;
    if (nu.atoms().empty() && !nu.density()) return out;

    double cut = hi;
    const double support_hi = nu.support_hi();
    if (std::isfinite(support_hi)) cut = std::min(cut, support_hi);
    if (!std::isfinite(cut)) {
        const double mean_scale = curve.mean ? std::abs(*curve.mean) : 0.0;
        const double negligible = 1e-13 * (1.0 + mean_scale);
        if (curve.evaluator) {
            double k = std::max(curve.strikes.empty() ? 1.0 : curve.strikes.back(), 1.0);
            while (call_at(curve, k) > negligible && k < 1e6) k *= 2.0;
            cut = k;
        } else {
            if (curve.strikes.empty())
                throw validation_error("price: curve has neither grid nor evaluator");
            cut = curve.strikes.back();
        }
        out.tail_bound = call_at(curve, cut) * nu.mass(half_open(cut, 4.0 * cut));
        if (out.tail_bound > opts.tail_budget)
            throw quadrature_error("price: truncation tail bound exceeds budget");
    }
    out.cut = cut;
    if (cut <= lo) return out;

    // A cut strictly inside (lo, hi) is interior to the original interval, so
    // the truncated interval closes at it (atoms exactly at the support end
    // must be kept); only at cut == hi does the caller's flag apply.
    Interval iv{lo, cut, false, cut < hi ? true : closed_hi};
    const std::vector<double> bps = strikes_within(curve, lo, cut);
    out.value = stieltjes_integrate([&](double k) { return call_at(curve, k); }, nu, iv,
                                    opts.quad, bps, cut);
    return out;
}

PriceBreakdown signed_curvature_integral(const PriceCurve& curve, const StieltjesMeasure& nu,
                                         double lo, double hi, bool closed_hi,
                                         const PricingOptions& opts) {
    if (nu.is_positive()) return positive_curvature_integral(curve, nu, lo, hi, closed_hi, opts);
    const auto [pos, neg] = nu.split();
    const PriceBreakdown p = positive_curvature_integral(curve, pos, lo, hi, closed_hi, opts);
    const PriceBreakdown n = positive_curvature_integral(curve, neg, lo, hi, closed_hi, opts);
    return {p.value - n.value, p.tail_bound + n.tail_bound, std::max(p.cut, n.cut)};
}

}  // namespace

double DCPayoff::reconstruction(double x) const {
    return g0 + slope0 * x + curvature.ramp_integral(x);
}

double DCPayoff::value(double x) const {
    return evaluator ? evaluator(x) : reconstruction(x);
}

double DCPayoff::right_slope(double x) const {
    if (x <= 0.0) return slope0;
    return slope0 + curvature.mass(half_open(0.0, x));
}

std::pair<std::array<double, 2>, DCPayoff> normalize_dc(const DCPayoff& payoff) {
    DCPayoff stripped = payoff;
    stripped.g0 = 0.0;
    stripped.slope0 = 0.0;
    stripped.evaluator = nullptr;  // the closed form no longer matches
    return {{payoff.g0, payoff.slope0}, std::move(stripped)};
}

PriceBreakdown price_convex(const PriceCurve& call, const DCPayoff& payoff,
                            const PricingOptions& opts) {
    if (!payoff.is_convex())
        throw validation_error("price_convex: curvature measure is signed; use price_dc");
    if (!call.f_infinity || !call.mean)
        throw validation_error("price_convex: curve needs F(inf) and mean metadata");
    PriceBreakdown out =
        positive_curvature_integral(call, payoff.curvature, 0.0, kInf, true, opts);
    out.value += payoff.g0 * *call.f_infinity + payoff.slope0 * *call.mean;
    return out;
}

PriceBreakdown price_dc(const PriceCurve& call, const DCPayoff& payoff,
                        const PricingOptions& opts) {
    if (!call.f_infinity || !call.mean)
        throw validation_error("price_dc: curve needs F(inf) and mean metadata");
    PriceBreakdown out = signed_curvature_integral(call, payoff.curvature, 0.0, kInf, true, opts);
    out.value += payoff.g0 * *call.f_infinity + payoff.slope0 * *call.mean;
    return out;
}

double DCPiece::value(double x) const {
    if (x < lo || x >= hi) return 0.0;
    if (evaluator) return evaluator(x);
    return g_lo + slope_lo * (x - lo) + curvature.ramp_integral(x, lo);
}

DCPiece make_piece(double lo, double hi, double g_lo, double slope_lo,
                   StieltjesMeasure curvature, std::function<double(double)> evaluator) {
    if (!(lo >= 0.0 && lo < hi)) throw validation_error("make_piece: need 0 <= lo < hi");
    DCPiece p;
    p.lo = lo;
    p.hi = hi;
    p.g_lo = g_lo;
    p.slope_lo = slope_lo;
    if (std::isfinite(hi)) {
        p.slope_hi_minus = slope_lo + curvature.mass(open_interval(lo, hi));
        p.g_hi_minus = g_lo + slope_lo * (hi - lo) + curvature.ramp_integral(hi, lo);
    }
    p.curvature = std::move(curvature);
    p.evaluator = std::move(evaluator);
    return p;
}

void PiecewiseDCPayoff::validate() const {
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].lo < pieces[i].hi))
            throw validation_error("piecewise payoff: piece with lo >= hi");
        if (i > 0 && pieces[i].lo < pieces[i - 1].hi)
            throw validation_error("piecewise payoff: pieces overlap or are unsorted");
    }
}

double PiecewiseDCPayoff::value(double x) const {
    for (const DCPiece& p : pieces)
        if (x >= p.lo && x < p.hi) return p.value(x);
    return 0.0;
}

PriceBreakdown price_piecewise_dc(const PriceCurve& call, const PiecewiseDCPayoff& payoff,
                                  const PricingOptions& opts) {
    payoff.validate();
    PriceBreakdown out;
    for (const DCPiece& p : payoff.pieces) {
        const double a = p.lo;
        const double b = p.hi;

        const double c_a = call_at(call, a);
        const double dp_a = dplus_call(call, a);
        const double dm_a = dminus_call(call, a);

        // Open-interval formula plus the atom of dF at a:
        //   C(a) D+g(a) - D+C(a) g(a) + g(a) (D+C(a) - D-C(a)).
        double piece = c_a * p.slope_lo - dp_a * p.g_lo + p.g_lo * (dp_a - dm_a);
        if (std::isfinite(b)) {
            piece += -call_at(call, b) * p.slope_hi_minus + dminus_call(call, b) * p.g_hi_minus;
        }

        const PriceBreakdown inner =
            signed_curvature_integral(call, p.curvature, a, b, false, opts);
        out.value += piece + inner.value;
        out.tail_bound += inner.tail_bound;
        out.cut = std::max(out.cut, inner.cut);
    }
    return out;
}

Portfolio dyadic_call_portfolio(const DCPayoff& payoff, int level) {
    if (level < 1 || level > 24) throw validation_error("dyadic_call_portfolio: level out of range");
    if (payoff.g0 != 0.0 || payoff.slope0 != 0.0)
        throw validation_error("dyadic_call_portfolio: payoff must be normalized (g0 = slope0 = 0)");
    if (!payoff.is_convex())
        throw validation_error("dyadic_call_portfolio: curvature must be positive");

    const double n = static_cast<double>(level);
    const size_t cells = size_t{1} << level;
    const double width = n / static_cast<double>(cells);

    Portfolio p;
    for (size_t i = 0; i < cells; ++i) {
        const double k_lo = static_cast<double>(i) * width;
        const double k_hi = static_cast<double>(i + 1) * width;
        const double qty = payoff.curvature.mass(half_open(k_lo, k_hi));
        if (qty != 0.0) p.legs.push_back({k_hi, qty, OptionRole::Call});
    }
    return p;
}

std::vector<TailDecayRow> tail_decay_report(const Measure& measure, const DCPayoff& payoff,
                                            std::span<const double> a_grid) {
    const double f_inf = measure.total_mass();
    std::vector<TailDecayRow> rows;
    rows.reserve(a_grid.size());
    for (double a : a_grid) {
        rows.push_back({a, payoff.value(a) * (f_inf - measure.cdf(a)),
                        measure.call_value(a) * payoff.right_slope(a)});
    }
    return rows;
}

TableDensity curvature_from_evaluator(const std::function<double(double)>& g,
                                      std::span<const double> grid) {
    TableDensity table;
    table.x.assign(grid.begin(), grid.end());
    table.f.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double h = 1e-4 * (1.0 + std::abs(x));
        table.f[i] = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    }
    table.validate();
    return table;
}

}  // namespace dfkit
