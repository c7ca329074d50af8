#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dfkit/curves.hpp"

namespace dfkit {

/// Hermite function psi_j (L2(R)-orthonormal): psi_0 = pi^{-1/4} e^{-x^2/2},
/// psi_j = sqrt(2/j) x psi_{j-1} - sqrt((j-1)/j) psi_{j-2}.
double hermite_function(int j, double x);

/// psi_0..psi_order at x in one recurrence pass.
std::vector<double> hermite_values(int order, double x);

/// Truncated Hermite expansion of a log-return density.
struct DensityApprox {
    int order = 0;
    std::vector<double> coeffs;  // order + 1 entries

    double value(double x) const;
};

/// Half-width of the projection window: generous against the ~sqrt(2j+1)
/// classical turning point so the tail truncation is far below tolerance.
double projection_half_width(int order);

DensityApprox hermite_project(const std::function<double(double)>& f, int order,
                              const QuadOptions& opts = {});

double l2_norm(const std::function<double(double)>& f, double half_width,
               const QuadOptions& opts = {});

/// || f - approx ||_L2 over [-L, L] with L from projection_half_width.
double l2_error(const std::function<double(double)>& f, const DensityApprox& approx,
                const QuadOptions& opts = {});

/// theta_{k1,k2}(x) = (k2 - e^x)^+ - (k2/k1)(k1 - e^x)^+ in log-price space.
/// Unlike the raw put payoff it decays like e^x as x -> -inf, hence lies in
/// L2 and can be paired with the expansion.
struct ThetaPayoff {
    double k1;
    double k2;  // both positive; k1 = k2 degenerates to theta == 0

    void validate() const;
    double value(double x) const;
    double support_hi() const;  // log max(k1, k2)
};

/// Put price ∫ (k - e^x)^+ q(x) dx under a log-space density approximation.
double put_under_approx(const DensityApprox& approx, double k, const QuadOptions& opts = {});

/// <theta, q> for an expansion or a raw density (half_width bounds the
/// integration window on the left).
double theta_inner(const ThetaPayoff& theta, const DensityApprox& approx,
                   const QuadOptions& opts = {});
double theta_inner(const ThetaPayoff& theta, const std::function<double(double)>& density,
                   double half_width, const QuadOptions& opts = {});

/// Put curve induced by the expansion. Signed approximations break curve
/// monotonicity/convexity, so the result is flagged non-coherent and carries
/// no F(inf)/mean metadata.
PriceCurve pushforward_to_price(const DensityApprox& approx, std::vector<double> strikes);

/// <theta_{k1,k2}, f_n> tabulated over expansion orders and lower strikes.
/// The iterated limit (n up, then k1 down) recovers P(k2); the diagonal is an
/// exploratory single-sequence read of the same table.
struct RecoveryResult {
    std::vector<int> orders;
    std::vector<double> k1s;
    std::vector<std::vector<double>> table;  // [order index][k1 index]
    double estimate;            // largest order, smallest k1
    double diagonal_estimate;
    double correction;          // dropped bias term (k2/k1) P_n(k1) at the estimate corner
};

RecoveryResult recover_put(const std::function<double(double)>& log_density, double k2,
                           std::span<const int> orders, std::span<const double> k1s,
                           const QuadOptions& opts = {});

}  // namespace dfkit
