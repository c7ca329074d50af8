#pragma once

#include <vector>

#include "dfkit/curves.hpp"

namespace dfkit {

/// Grid estimate of F from put prices. f_hat[i] is the forward difference
/// quotient on [k_i, k_{i+1}] and is bracketed by F(k_i) and F(k_{i+1}).
struct CdfEstimate {
    std::vector<double> strikes;  // one per quotient (last input strike dropped)
    std::vector<double> f_hat;
    std::vector<double> bound;    // bracket width from neighbouring quotients
};

/// Breeden-Litzenberger-type inversion: F_hat(k_i) = (P(k_{i+1}) - P(k_i)) /
/// (k_{i+1} - k_i). The reported bound uses only quotient monotonicity (the
/// consumer has the curve, not F): F(k_i) lies in [q_{i-1}, q_i] and
/// F(k_{i+1}) in [q_i, q_{i+1}], so |F_hat - F| on the bracket is at most
/// q_{i+1} - q_{i-1} (edges clamped at 0 and, when known, F(inf)).
CdfEstimate cdf_from_puts(const PriceCurve& put);

}  // namespace dfkit
