#include "dfkit/portfolio.hpp"

#include <algorithm>
#include <cmath>

namespace dfkit {

double Portfolio::payoff(double x) const {
    double acc = bond_units + forward_units * x;
    for (const OptionLeg& leg : legs) {
        const double intrinsic = (leg.role == OptionRole::Put) ? leg.strike - x : x - leg.strike;
        acc += leg.quantity * std::max(intrinsic, 0.0);
    }
    return acc;
}

std::vector<double> Portfolio::kinks() const {
    std::vector<double> ks;
    ks.reserve(legs.size());
    for (const OptionLeg& leg : legs) ks.push_back(leg.strike);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

double portfolio_price(const Portfolio& p, const Measure& measure) {
    double acc = p.bond_units * measure.total_mass();
    if (p.forward_units != 0.0) acc += p.forward_units * measure.mean();
    for (const OptionLeg& leg : p.legs)
        acc += leg.quantity * ((leg.role == OptionRole::Put) ? measure.put_value(leg.strike)
                                                            : measure.call_value(leg.strike));
    return acc;
}

double portfolio_price(const Portfolio& p, const PriceCurve& curve) {
    double acc = 0.0;
    if (p.bond_units != 0.0) {
        if (!curve.f_infinity) throw validation_error("portfolio_price: missing F(inf) metadata");
        acc += p.bond_units * *curve.f_infinity;
    }
    if (p.forward_units != 0.0) {
        if (!curve.mean) throw validation_error("portfolio_price: missing mean metadata");
        acc += p.forward_units * *curve.mean;
    }
    for (const OptionLeg& leg : p.legs) {
        double v = curve.value(leg.strike);
        if (leg.role != curve.role) {
            // Put-call parity: C = P - k F(inf) + mean.
            if (!curve.f_infinity || !curve.mean)
                throw validation_error("portfolio_price: parity flip needs metadata");
            const double sgn = (leg.role == OptionRole::Call) ? 1.0 : -1.0;
            v += sgn * (*curve.mean - leg.strike * *curve.f_infinity);
        }
        acc += leg.quantity * v;
    }
    return acc;
}

Portfolio put_spread_indicator(double a, double b) {
    if (!(0.0 <= a && a < b)) throw validation_error("put_spread_indicator: need 0 <= a < b");
    const double alpha = 1.0 / (b - a);
    Portfolio p;
    p.legs.push_back({b, alpha, OptionRole::Put});
    p.legs.push_back({a, -alpha, OptionRole::Put});
    return p;
}

Portfolio replicate_piecewise_linear(std::span<const PayoffNode> nodes,
                                     double terminal_slope, OptionRole prefer) {
    if (nodes.size() < 1 || nodes.front().x != 0.0)
        throw validation_error("replicate_piecewise_linear: first node must sit at x = 0");
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i].x < nodes[i + 1].x))
            throw validation_error("replicate_piecewise_linear: nodes must be sorted");

    // Payoff = g(0) + s_0 x + sum_j ds_j (x - x_j)^+ with ds_j the slope jumps
    // at the interior nodes.
    std::vector<double> slopes;
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        slopes.push_back((nodes[i + 1].g - nodes[i].g) / (nodes[i + 1].x - nodes[i].x));
    slopes.push_back(terminal_slope);
    const double s0 = slopes.front();

    Portfolio p;
    p.bond_units = nodes.front().g;
    p.forward_units = s0;
    for (size_t j = 1; j < nodes.size(); ++j) {
        const double ds = slopes[j] - slopes[j - 1];
        if (ds == 0.0) continue;
        if (prefer == OptionRole::Call) {
            p.legs.push_back({nodes[j].x, ds, OptionRole::Call});
        } else {
            // (x-k)^+ = (k-x)^+ + x - k
            p.legs.push_back({nodes[j].x, ds, OptionRole::Put});
            p.forward_units += ds;
            p.bond_units -= ds * nodes[j].x;
        }
    }
    return p;
}

ApproxReport l1_approximation_report(const std::function<double(double)>& g,
                                     const Portfolio& p, const Measure& measure,
                                     std::span<const double> breakpoints) {
    std::vector<double> bps(breakpoints.begin(), breakpoints.end());
    for (double k : p.kinks()) bps.push_back(k);
    auto diff = [&](double x) { return std::abs(g(x) - p.payoff(x)); };
    const double l1 = oracle_price(measure, diff, {}, bps).price;
    const double pg = oracle_price(measure, g, {}, bps).price;
    const double pp = portfolio_price(p, measure);
    return {l1, std::abs(pg - pp)};
}

}  // namespace dfkit
