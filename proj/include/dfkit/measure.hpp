#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "dfkit/quadrature.hpp"

namespace dfkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class validation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Interval on the real line with explicit open/closed flags per endpoint.
/// Default convention is half-open (lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = kInf;
    bool closed_lo = false;
    bool closed_hi = true;

    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !closed_lo) return false;
        if (x == hi && !closed_hi) return false;
        return true;
    }
};

inline Interval half_open(double lo, double hi) { return {lo, hi, false, true}; }
inline Interval open_interval(double lo, double hi) { return {lo, hi, false, false}; }
inline Interval positive_axis() { return {0.0, kInf, false, true}; }

double norm_cdf(double x);
double norm_pdf(double x);

/// Lognormal density of S_T under zero rates: log S_T ~ N(log s0 - sigma^2 T/2,
/// sigma^2 T), scaled by `scale` so sub-probability masses are representable.
struct LognormalDensity {
    double s0 = 1.0;
    double sigma = 0.2;
    double maturity = 1.0;
    double scale = 1.0;

    double log_mean() const;
    double log_sd() const;
    double pdf(double x) const;
    double cdf(double x) const;          // mass of (0, x]
    double mass() const { return scale; }
    double mean() const { return scale * s0; }
    double partial_mean(double x) const;  // ∫_0^x t f(t) dt
    double put_value(double k) const;     // ∫ (k-t)^+ f(t) dt
    double call_value(double k) const;    // ∫ (t-k)^+ f(t) dt
    double upper_cut() const;             // x beyond which mass and mean tails are negligible
};

/// Tabulated density with piecewise-linear interpolation between grid nodes and
/// zero outside the grid span. Values may be signed when used inside a
/// StieltjesMeasure; Measure construction rejects negative values.
struct TableDensity {
    std::vector<double> x;
    std::vector<double> f;

    void validate() const;
    double pdf(double t) const;
    double cdf(double t) const;           // ∫_{x.front()}^{t} f
    double mass() const { return cdf(x.back()); }
    double mean() const;                  // ∫ t f(t) dt
    double put_value(double k) const;     // segment-exact ∫ (k-t)^+ f
    double call_value(double k) const;
    double abs_mass(double lo, double hi) const;  // ∫ |f| over [lo,hi]
    TableDensity clipped(bool positive_part) const;
};

/// Constant density `value` on [lo, hi] (hi may be +inf). Used for curvature
/// measures like 2·Lebesgue; not allowed inside a (finite) Measure when
/// unbounded.
struct ConstantDensity {
    double value = 0.0;
    double lo = 0.0;
    double hi = kInf;
};

using Density = std::variant<LognormalDensity, TableDensity>;

struct Atom {
    double x;
    double w;
};

/// Positive finite measure dF on R_+: finitely many atoms plus one optional
/// absolutely-continuous part. Immutable after construction.
class Measure {
  public:
    Measure(std::vector<Atom> atoms, std::optional<Density> density,
            bool finite_mean_flag = true,
            std::optional<double> total_mass_cap = std::nullopt);

    static Measure point_mass(double x, double w = 1.0);
    static Measure from_atoms(std::vector<Atom> atoms);

    double cdf(double x) const;       // right-continuous, includes atom at x
    double cdf_left(double x) const;  // excludes atom at x
    double total_mass() const;
    double mean() const;              // throws unless finite_mean flag set
    bool has_finite_mean() const { return finite_mean_; }

    double put_value(double k) const;   // ∫ (k-t)^+ dF, closed form / segment-exact
    double call_value(double k) const;  // ∫ (t-k)^+ dF, requires finite_mean

    double density_pdf(double x) const;
    double upper_cut() const;  // effective support bound for quadrature
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<Density>& density() const { return density_; }

  private:
    std::vector<Atom> atoms_;
    std::optional<Density> density_;
    bool finite_mean_;
};

/// ∫ f dF over an interval: exact atom sum (respecting endpoint flags) plus
/// adaptive quadrature against the density part.
double integrate(const std::function<double(double)>& f, const Measure& m,
                 const Interval& interval, const QuadOptions& opts = {},
                 std::span<const double> breakpoints = {});

using SignedDensity = std::variant<TableDensity, ConstantDensity>;

/// Signed measure of finite total variation on its support: signed atoms plus
/// one optional signed density. This is the curvature-measure carrier.
class StieltjesMeasure {
  public:
    StieltjesMeasure() = default;
    StieltjesMeasure(std::vector<Atom> atoms, std::optional<SignedDensity> density);

    static StieltjesMeasure from_atoms(std::vector<Atom> atoms);
    static StieltjesMeasure lebesgue(double scale, double lo = 0.0, double hi = kInf);
    static StieltjesMeasure from_table(TableDensity table);
    static StieltjesMeasure from_measure(const Measure& m);  // density must be a table

    double mass(const Interval& interval) const;
    double total_variation(const Interval& interval) const;
    bool is_positive() const;
    bool has_unbounded_density() const;
    double support_hi() const;  // may be +inf

    /// Jordan decomposition; each part is a positive StieltjesMeasure.
    std::pair<StieltjesMeasure, StieltjesMeasure> split() const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<SignedDensity>& density() const { return density_; }

    /// ∫ (x-k)^+ dm(k) over (max(lo_clip,0), ∞), segment-exact in the density.
    double ramp_integral(double x, double lo_clip = 0.0) const;

  private:
    std::vector<Atom> atoms_;
    std::optional<SignedDensity> density_;
};

/// The shared ∫ f dm kernel for signed Stieltjes measures. For unbounded
/// density supports an explicit upper cut must be supplied.
double stieltjes_integrate(const std::function<double(double)>& f,
                           const StieltjesMeasure& m, const Interval& interval,
                           const QuadOptions& opts = {},
                           std::span<const double> breakpoints = {},
                           std::optional<double> upper_cut = std::nullopt);

}  // namespace dfkit
