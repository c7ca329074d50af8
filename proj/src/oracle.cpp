#include "dfkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

namespace dfkit {

OracleResult oracle_price(const Measure& measure, const std::function<double(double)>& g,
                          const OracleConfig& config, std::span<const double> breakpoints) {
    OracleResult out;
    for (const Atom& a : measure.atoms()) out.price += a.w * g(a.x);
    if (measure.density()) {
        double lo = 0.0, hi = measure.upper_cut();
        std::vector<double> bps(breakpoints.begin(), breakpoints.end());
        if (const auto* td = std::get_if<TableDensity>(&*measure.density())) {
            lo = td->x.front();
            hi = td->x.back();
            bps.insert(bps.end(), td->x.begin(), td->x.end());
        }
        QuadOptions q{config.abs_tol, config.rel_tol, config.max_intervals};
        auto integrand = [&](double x) { return g(x) * measure.density_pdf(x); };
        QuadResult r = integrate(integrand, lo, hi, q, bps);
        out.price += r.value;
        out.error_estimate = r.error;
    }
    return out;
}

}  // namespace dfkit
