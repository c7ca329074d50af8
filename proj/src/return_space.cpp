#include "dfkit/return_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dfkit {
namespace {

constexpr double kPsi0Norm = 0.75112554446494248;  // pi^{-1/4}

}  // namespace

std::vector<double> hermite_values(int order, double x) {
    if (order < 0) throw validation_error("hermite_values: order must be >= 0");
    std::vector<double> psi(static_cast<size_t>(order) + 1);
    psi[0] = kPsi0Norm * std::exp(-0.5 * x * x);
    if (order >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int j = 2; j <= order; ++j)
        psi[j] = std::sqrt(2.0 / j) * x * psi[j - 1] - std::sqrt((j - 1.0) / j) * psi[j - 2];
    return psi;
}

double hermite_function(int j, double x) { return hermite_values(j, x)[static_cast<size_t>(j)]; }

double DensityApprox::value(double x) const {
    const std::vector<double> psi = hermite_values(order, x);
    double acc = 0.0;
    for (size_t j = 0; j < psi.size(); ++j) acc += coeffs[j] * psi[j];
    return acc;
}

double projection_half_width(int order) {
    return std::max(12.0, std::sqrt(2.0 * order + 1.0) + 8.0);
}

DensityApprox hermite_project(const std::function<double(double)>& f, int order,
                              const QuadOptions& opts) {
    if (order < 0) throw validation_error("hermite_project: order must be >= 0");
    const double L = projection_half_width(order);
    DensityApprox approx;
    approx.order = order;
    approx.coeffs.resize(static_cast<size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) {
        auto integrand = [&](double x) { return f(x) * hermite_function(j, x); };
        approx.coeffs[static_cast<size_t>(j)] = integrate(integrand, -L, L, opts, {}).value;
    }
    return approx;
}

double l2_norm(const std::function<double(double)>& f, double half_width,
               const QuadOptions& opts) {
    auto sq = [&](double x) {
        const double v = f(x);
        return v * v;
    };
    return std::sqrt(integrate(sq, -half_width, half_width, opts, {}).value);
}

double l2_error(const std::function<double(double)>& f, const DensityApprox& approx,
                const QuadOptions& opts) {
    const double L = projection_half_width(approx.order);
    auto diff = [&](double x) { return f(x) - approx.value(x); };
    return l2_norm(diff, L, opts);
}

void ThetaPayoff::validate() const {
    if (!(0.0 < k1 && 0.0 < k2)) throw validation_error("theta payoff: strikes must be positive");
}

double ThetaPayoff::value(double x) const {
    const double s = std::exp(x);
    return std::max(k2 - s, 0.0) - (k2 / k1) * std::max(k1 - s, 0.0);
}

double ThetaPayoff::support_hi() const { return std::log(std::max(k1, k2)); }

double put_under_approx(const DensityApprox& approx, double k, const QuadOptions& opts) {
    if (k < 0.0) throw validation_error("put_under_approx: strike must be nonnegative");
    if (k == 0.0) return 0.0;
    const double L = projection_half_width(approx.order);
    const double hi = std::min(std::log(k), L);
    if (hi <= -L) return 0.0;
    auto integrand = [&](double x) { return (k - std::exp(x)) * approx.value(x); };
    return integrate(integrand, -L, hi, opts, {}).value;
}

double theta_inner(const ThetaPayoff& theta, const DensityApprox& approx,
                   const QuadOptions& opts) {
    theta.validate();
    const double L = projection_half_width(approx.order);
    return theta_inner(theta, [&](double x) { return approx.value(x); }, L, opts);
}

double theta_inner(const ThetaPayoff& theta, const std::function<double(double)>& density,
                   double half_width, const QuadOptions& opts) {
    theta.validate();
    const double hi = std::min(theta.support_hi(), half_width);
    if (hi <= -half_width) return 0.0;
    auto integrand = [&](double x) { return theta.value(x) * density(x); };
    const double bp = std::log(theta.k1);
    std::vector<double> bps;
    if (bp > -half_width && bp < hi) bps.push_back(bp);
    return integrate(integrand, -half_width, hi, opts, bps).value;
}

PriceCurve pushforward_to_price(const DensityApprox& approx, std::vector<double> strikes) {
    PriceCurve curve;
    curve.role = OptionRole::Put;
    curve.coherent = false;
    curve.evaluator = [approx](double k) { return put_under_approx(approx, k); };
    curve.strikes = std::move(strikes);
    curve.values.reserve(curve.strikes.size());
    for (double k : curve.strikes) curve.values.push_back(curve.evaluator(k));
    return curve;
}

RecoveryResult recover_put(const std::function<double(double)>& log_density, double k2,
                           std::span<const int> orders, std::span<const double> k1s,
                           const QuadOptions& opts) {
    if (orders.empty() || k1s.empty())
        throw validation_error("recover_put: need at least one order and one lower strike");
    if (!std::is_sorted(orders.begin(), orders.end()))
        throw validation_error("recover_put: orders must be ascending");
    std::vector<double> k1_sorted(k1s.begin(), k1s.end());
    if (!std::is_sorted(k1_sorted.rbegin(), k1_sorted.rend()))
        throw validation_error("recover_put: lower strikes must be descending");

    RecoveryResult result;
    result.orders.assign(orders.begin(), orders.end());
    result.k1s = std::move(k1_sorted);

    DensityApprox last;
    for (int n : result.orders) {
        last = hermite_project(log_density, n, opts);
        std::vector<double> row;
        row.reserve(result.k1s.size());
        for (double k1 : result.k1s) row.push_back(theta_inner({k1, k2}, last, opts));
        result.table.push_back(std::move(row));
    }

    result.estimate = result.table.back().back();
    const size_t diag = std::min(result.orders.size(), result.k1s.size()) - 1;
    result.diagonal_estimate = result.table[diag][diag];
    const double k1_min = result.k1s.back();
    result.correction = (k2 / k1_min) * put_under_approx(last, k1_min, opts);
    return result;
}

}  // namespace dfkit
