#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfkit/measure.hpp"
#include "dfkit/reconstruct.hpp"
#include "dfkit/static_replication.hpp"

namespace dfkit {

/// File-level failures (missing file, unreadable, unparseable bytes). Schema
/// and invariant violations throw validation_error instead; the CLI maps the
/// two classes to different exit codes.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Measure spec:
///   { "atoms": [[x, w], ...],
///     "density": { "family": "lognormal", "s0": .., "sigma": .., "maturity": ..,
///                  "scale": .. }
///              | { "family": "table", "x": [..], "f": [..] },
///     "finite_mean": bool, "total_mass_cap": number }
/// Every field is optional except that atoms or density must give positive
/// mass. Unknown fields are rejected.
Measure measure_from_json_text(const std::string& text);
Measure load_measure(const std::string& path);

/// Payoff spec:
///   { "pieces": [ { "span": [a, b], "g0_at_a": .., "slope0_at_a": ..,
///                   "curvature": { "atoms": [[k, w], ...],
///                                  "density": <table|constant family> } } ] }
/// b may be the string "inf". Unknown fields are rejected.
PiecewiseDCPayoff payoff_from_json_text(const std::string& text);
PiecewiseDCPayoff load_payoff(const std::string& path);

/// Curve CSV: header `strike,price`, one sorted row per strike. Metadata
/// sidecar (same path with the .csv suffix replaced by .meta.json):
///   { "role": "put"|"call", "f_infinity": number, "mean": number }
/// with f_infinity/mean optional.
PriceCurve load_curve(const std::string& csv_path);
void save_curve(const PriceCurve& curve, const std::string& csv_path);

std::string sidecar_path(const std::string& csv_path);

void write_cdf_estimate(const CdfEstimate& est, std::ostream& out);

/// Log-return density spec for the convergence pipeline:
///   { "family": "gaussian", "mean": .., "sd": .. }
std::function<double(double)> density_from_json_text(const std::string& text);
std::function<double(double)> load_density(const std::string& path);

/// Strike-grid syntax start:stop:step (stop inclusive up to rounding slack).
std::vector<double> parse_strike_range(const std::string& spec);

std::string read_file(const std::string& path);

}  // namespace dfkit
