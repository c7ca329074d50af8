#include "dfkit/curves.hpp"

#include <algorithm>
#include <cmath>

namespace dfkit {

void PriceCurve::validate_grid() const {
    if (strikes.size() != values.size())
        throw validation_error("price curve: strike/value size mismatch");
    for (size_t i = 0; i + 1 < strikes.size(); ++i)
        if (!(strikes[i] < strikes[i + 1]))
            throw validation_error("price curve: strikes must be sorted and distinct");
    if (!strikes.empty() && strikes.front() < 0.0)
        throw validation_error("price curve: strikes must be nonnegative");
}

double PriceCurve::value(double k) const {
    if (evaluator) return evaluator(k);
    if (strikes.empty()) throw validation_error("price curve: empty grid");
    if (k <= strikes.front()) {
        if (k == strikes.front()) return values.front();
        throw validation_error("price curve: strike below grid span");
    }
    if (k > strikes.back()) throw validation_error("price curve: strike beyond grid span");
    auto it = std::lower_bound(strikes.begin(), strikes.end(), k);
    size_t i = static_cast<size_t>(it - strikes.begin());
    if (strikes[i] == k) return values[i];
    const double w = (k - strikes[i - 1]) / (strikes[i] - strikes[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

PriceCurve put_curve(const Measure& measure, std::vector<double> strikes) {
    PriceCurve c;
    c.role = OptionRole::Put;
    c.strikes = std::move(strikes);
    c.values.reserve(c.strikes.size());
    for (double k : c.strikes) {
        if (k < 0.0) throw validation_error("put_curve: negative strike");
        c.values.push_back(measure.put_value(k));
    }
    c.validate_grid();
    c.evaluator = [measure](double k) { return measure.put_value(k); };
    c.f_infinity = measure.total_mass();
    if (measure.has_finite_mean()) c.mean = measure.mean();
    return c;
}

PriceCurve call_curve(const Measure& measure, std::vector<double> strikes) {
    if (!measure.has_finite_mean())
        throw validation_error("call_curve: measure must be flagged finite_mean");
    PriceCurve c;
    c.role = OptionRole::Call;
    c.strikes = std::move(strikes);
    c.values.reserve(c.strikes.size());
    for (double k : c.strikes) {
        if (k < 0.0) throw validation_error("call_curve: negative strike");
        c.values.push_back(measure.call_value(k));
    }
    c.validate_grid();
    c.evaluator = [measure](double k) { return measure.call_value(k); };
    c.f_infinity = measure.total_mass();
    c.mean = measure.mean();
    return c;
}

std::vector<double> parity_gap(const PriceCurve& put, const PriceCurve& call,
                               double f_infinity, double mean) {
    if (put.strikes != call.strikes)
        throw validation_error("parity_gap: curves must share the strike grid");
    std::vector<double> gap(put.strikes.size());
    for (size_t i = 0; i < put.strikes.size(); ++i)
        gap[i] = call.values[i] - put.values[i] + put.strikes[i] * f_infinity - mean;
    return gap;
}

double right_derivative(const PriceCurve& curve, double k) {
    if (curve.evaluator) {
        // Shrink the forward step until two consecutive quotients agree; stop
        // before cancellation noise dominates.
        double h = 1e-4 * std::max(1.0, std::abs(k));
        double prev = (curve.evaluator(k + h) - curve.evaluator(k)) / h;
        for (int i = 0; i < 10; ++i) {
            h *= 0.5;
            const double d = (curve.evaluator(k + h) - curve.evaluator(k)) / h;
            if (std::abs(d - prev) <= 1e-11 * (1.0 + std::abs(d))) return d;
            prev = d;
        }
        return prev;
    }
    curve.validate_grid();
    if (curve.strikes.size() < 2 || k < curve.strikes.front() || k >= curve.strikes.back())
        throw validation_error("right_derivative: strike at or beyond last grid point");
    auto it = std::upper_bound(curve.strikes.begin(), curve.strikes.end(), k);
    size_t i = static_cast<size_t>(it - curve.strikes.begin());
    if (i == 0) i = 1;
    // Segment [i-1, i] contains k with k < strikes[i]; use the forward segment
    // starting at k's cell.
    return (curve.values[i] - curve.values[i - 1]) /
           (curve.strikes[i] - curve.strikes[i - 1]);
}

double left_derivative(const PriceCurve& curve, double k) {
    if (curve.evaluator) {
        double h = 1e-4 * std::max(1.0, std::abs(k));
        double prev = (curve.evaluator(k) - curve.evaluator(k - h)) / h;
        for (int i = 0; i < 10; ++i) {
            h *= 0.5;
            const double d = (curve.evaluator(k) - curve.evaluator(k - h)) / h;
            if (std::abs(d - prev) <= 1e-11 * (1.0 + std::abs(d))) return d;
            prev = d;
        }
        return prev;
    }
    curve.validate_grid();
    if (curve.strikes.size() < 2)
        throw validation_error("left_derivative: need at least two strikes");
    if (k <= curve.strikes.front()) {
        // The call curve extends linearly with slope -F(inf) to the left of 0.
        if (curve.role == OptionRole::Call && curve.f_infinity) return -*curve.f_infinity;
        if (curve.role == OptionRole::Put) return 0.0;
        throw validation_error("left_derivative: strike at or before first grid point");
    }
    if (k > curve.strikes.back())
        throw validation_error("left_derivative: strike beyond grid span");
    auto it = std::lower_bound(curve.strikes.begin(), curve.strikes.end(), k);
    size_t i = static_cast<size_t>(it - curve.strikes.begin());
    if (curve.strikes[i] > k || i == 0) {
        // k interior to segment [i-1, i]: one-sided slopes coincide there.
        if (i == 0) i = 1;
    }
    return (curve.values[i] - curve.values[i - 1]) /
           (curve.strikes[i] - curve.strikes[i - 1]);
}

double bs_put(double s0, double k, double t, double sigma) {
    if (k <= 0.0) return 0.0;
    if (sigma <= 0.0 || t <= 0.0) return std::max(k - s0, 0.0);
    const double sd = sigma * std::sqrt(t);
    const double d1 = (std::log(s0 / k) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return k * norm_cdf(-d2) - s0 * norm_cdf(-d1);
}

double bs_call(double s0, double k, double t, double sigma) {
    return bs_put(s0, k, t, sigma) + s0 - k;
}

double implied_vol(double price, double s0, double k, double t) {
    const double intrinsic = std::max(k - s0, 0.0);
    if (!(price >= intrinsic) || !(price < k))
        throw validation_error("implied_vol: price outside the no-arbitrage band");
    double lo = 1e-9, hi = 5.0;
    if (bs_put(s0, k, t, hi) < price)
        throw validation_error("implied_vol: price above the bracket ceiling");
    if (bs_put(s0, k, t, lo) >= price) return lo;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bs_put(s0, k, t, mid) < price)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace dfkit
