#pragma once

#include <span>
#include <vector>

#include "dfkit/curves.hpp"
#include "dfkit/oracle.hpp"

namespace dfkit {

struct OptionLeg {
    double strike;
    double quantity;
    OptionRole role;
};

/// Finite linear combination of bonds, forwards, puts and calls — an element
/// of the span of a measurement set.
struct Portfolio {
    double bond_units = 0.0;
    double forward_units = 0.0;
    std::vector<OptionLeg> legs;

    double payoff(double x) const;
    std::vector<double> kinks() const;  // strikes, for quadrature hints
};

/// Exact price under a measure: bond·F(inf) + forward·mean + per-leg closed
/// forms.
double portfolio_price(const Portfolio& p, const Measure& measure);

/// Price from a quoted curve (plus metadata for bond/forward legs and the
/// parity flip when a leg's role does not match the curve's).
double portfolio_price(const Portfolio& p, const PriceCurve& curve);

/// The 2-put portfolio (1/(b-a))·Put(b) - (1/(b-a))·Put(a), whose payoff is 1
/// on [0,a], 0 on [b,inf) and linear between. L1(dF) distance to 1_[0,a] is
/// bounded by F(b) - F(a).
Portfolio put_spread_indicator(double a, double b);

struct PayoffNode {
    double x;
    double g;
};

/// Exact static replication of a continuous piecewise-linear payoff (nodes
/// sorted, first at x=0; slope after the last node given by terminal_slope)
/// as bond + forward + options at the interior kinks.
Portfolio replicate_piecewise_linear(std::span<const PayoffNode> nodes,
                                     double terminal_slope,
                                     OptionRole prefer = OptionRole::Put);

struct ApproxReport {
    double l1_error;
    double price_error;
};

/// L1(dF) distance between a payoff and a portfolio payoff, plus the induced
/// pricing error. Both computed against the oracle.
ApproxReport l1_approximation_report(const std::function<double(double)>& g,
                                     const Portfolio& p, const Measure& measure,
                                     std::span<const double> breakpoints = {});

}  // namespace dfkit
