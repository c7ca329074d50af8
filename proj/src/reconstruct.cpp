#include "dfkit/reconstruct.hpp"

#include <algorithm>

namespace dfkit {

CdfEstimate cdf_from_puts(const PriceCurve& put) {
    put.validate_grid();
    if (put.role != OptionRole::Put)
        throw validation_error("cdf_from_puts: expects a put curve");
    const size_t n = put.strikes.size();
    if (n < 2) throw validation_error("cdf_from_puts: need at least two strikes");

    std::vector<double> q(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
        q[i] = (put.values[i + 1] - put.values[i]) / (put.strikes[i + 1] - put.strikes[i]);

    CdfEstimate est;
    est.strikes.assign(put.strikes.begin(), put.strikes.end() - 1);
    est.f_hat = q;
    est.bound.resize(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        const double lower = (i > 0) ? q[i - 1] : 0.0;
        double upper;
        if (i + 1 < q.size())
            upper = q[i + 1];
        else
            upper = put.f_infinity ? *put.f_infinity : q[i];
        est.bound[i] = std::max(upper - lower, 0.0);
    }
    return est;
}

}  // namespace dfkit
