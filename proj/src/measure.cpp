#include "dfkit/measure.hpp"

#include <algorithm>
#include <cmath>

namespace dfkit {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// ---------------------------------------------------------------------------
// LognormalDensity
// ---------------------------------------------------------------------------

double LognormalDensity::log_mean() const {
    return std::log(s0) - 0.5 * sigma * sigma * maturity;
}

double LognormalDensity::log_sd() const { return sigma * std::sqrt(maturity); }

double LognormalDensity::pdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double sd = log_sd();
    const double z = (std::log(x) - log_mean()) / sd;
    return scale * norm_pdf(z) / (x * sd);
}

double LognormalDensity::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return scale * norm_cdf((std::log(x) - log_mean()) / log_sd());
}

double LognormalDensity::partial_mean(double x) const {
    if (x <= 0.0) return 0.0;
    const double sd = log_sd();
    return scale * s0 * norm_cdf((std::log(x) - log_mean() - sd * sd) / sd);
}

double LognormalDensity::put_value(double k) const {
    if (k <= 0.0) return 0.0;
    const double sd = log_sd();
    const double d1 = (std::log(s0 / k) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return scale * (k * norm_cdf(-d2) - s0 * norm_cdf(-d1));
}

double LognormalDensity::call_value(double k) const {
    if (k <= 0.0) return mean() - k * mass();
    const double sd = log_sd();
    const double d1 = (std::log(s0 / k) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return scale * (s0 * norm_cdf(d1) - k * norm_cdf(d2));
}

double LognormalDensity::upper_cut() const {
    const double sd = log_sd();
    return std::exp(log_mean() + sd * sd + 10.0 * sd);
}

// ---------------------------------------------------------------------------
// TableDensity
// ---------------------------------------------------------------------------

namespace {

// Linear coefficients of the table on segment [x_i, x_{i+1}]: f(t) = a + b t.
inline void segment_coeffs(const TableDensity& td, size_t i, double& a, double& b) {
    const double u = td.x[i], v = td.x[i + 1];
    b = (td.f[i + 1] - td.f[i]) / (v - u);
    a = td.f[i] - b * u;
}

inline double lin_mass(double a, double b, double u, double v) {
    return a * (v - u) + 0.5 * b * (v * v - u * u);
}

inline double lin_mean(double a, double b, double u, double v) {
    return 0.5 * a * (v * v - u * u) + b * (v * v * v - u * u * u) / 3.0;
}

}  // namespace

void TableDensity::validate() const {
    if (x.size() < 2 || x.size() != f.size())
        throw validation_error("table density: need matching grids with >= 2 nodes");
    for (size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1]))
            throw validation_error("table density: grid must be strictly increasing");
}

double TableDensity::pdf(double t) const {
    if (t < x.front() || t > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    size_t i = (it == x.begin()) ? 0 : static_cast<size_t>(it - x.begin()) - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double w = (t - x[i]) / (x[i + 1] - x[i]);
    return f[i] + w * (f[i + 1] - f[i]);
}

double TableDensity::cdf(double t) const {
    if (t <= x.front()) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        const double u = x[i], v = std::min(t, x[i + 1]);
        if (v <= u) break;
        double a, b;
        segment_coeffs(*this, i, a, b);
        acc += lin_mass(a, b, u, v);
        if (t <= x[i + 1]) break;
    }
    return acc;
}

double TableDensity::mean() const {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        double a, b;
        segment_coeffs(*this, i, a, b);
        acc += lin_mean(a, b, x[i], x[i + 1]);
    }
    return acc;
}

double TableDensity::put_value(double k) const {
    if (k <= x.front()) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        const double u = x[i], v = std::min(k, x[i + 1]);
        if (v <= u) break;
        double a, b;
        segment_coeffs(*this, i, a, b);
        acc += k * lin_mass(a, b, u, v) - lin_mean(a, b, u, v);
        if (k <= x[i + 1]) break;
    }
    return acc;
}

double TableDensity::call_value(double k) const {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        const double u = std::max(k, x[i]), v = x[i + 1];
        if (v <= u) continue;
        double a, b;
        segment_coeffs(*this, i, a, b);
        acc += lin_mean(a, b, u, v) - k * lin_mass(a, b, u, v);
    }
    return acc;
}

double TableDensity::abs_mass(double lo, double hi) const {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        double u = std::max(lo, x[i]), v = std::min(hi, x[i + 1]);
        if (v <= u) continue;
        double a, b;
        segment_coeffs(*this, i, a, b);
        // Split at a sign change inside [u, v].
        const double fu = a + b * u, fv = a + b * v;
        if (fu * fv < 0.0) {
            const double root = -a / b;
            acc += std::abs(lin_mass(a, b, u, root)) + std::abs(lin_mass(a, b, root, v));
        } else {
            acc += std::abs(lin_mass(a, b, u, v));
        }
    }
    return acc;
}

TableDensity TableDensity::clipped(bool positive_part) const {
    const double sign = positive_part ? 1.0 : -1.0;
    TableDensity out;
    auto push = [&](double xx, double ff) {
        if (!out.x.empty() && out.x.back() == xx) return;
        out.x.push_back(xx);
        out.f.push_back(std::max(sign * ff, 0.0));
    };
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        push(x[i], f[i]);
        if (f[i] * f[i + 1] < 0.0) {
            double a, b;
            segment_coeffs(*this, i, a, b);
            push(-a / b, 0.0);
        }
    }
    push(x.back(), f.back());
    return out;
}

// ---------------------------------------------------------------------------
// Measure
// ---------------------------------------------------------------------------

namespace {

void validate_atoms(const std::vector<Atom>& atoms, bool positive_weights) {
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (positive_weights) {
            if (!(atoms[i].x >= 0.0)) throw validation_error("atom location must be >= 0");
            if (!(atoms[i].w > 0.0)) throw validation_error("atom weight must be > 0");
        } else if (atoms[i].w == 0.0) {
            throw validation_error("atom weight must be nonzero");
        }
        if (i > 0 && !(atoms[i - 1].x < atoms[i].x))
            throw validation_error("atom locations must be distinct and sorted ascending");
    }
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::optional<Density> density,
                 bool finite_mean_flag, std::optional<double> total_mass_cap)
    : atoms_(std::move(atoms)), density_(std::move(density)), finite_mean_(finite_mean_flag) {
    validate_atoms(atoms_, true);
    if (density_) {
        if (const auto* ln = std::get_if<LognormalDensity>(&*density_)) {
            if (!(ln->s0 > 0.0 && ln->sigma > 0.0 && ln->maturity > 0.0 && ln->scale >= 0.0))
                throw validation_error("lognormal density parameters must be positive");
        } else {
            const auto& td = std::get<TableDensity>(*density_);
            td.validate();
            if (!(td.x.front() >= 0.0))
                throw validation_error("table density support must lie in R_+");
            for (double v : td.f)
                if (v < 0.0) throw validation_error("density must be nonnegative");
        }
    }
    const double m = total_mass();
    if (!std::isfinite(m)) throw validation_error("measure must have finite total mass");
    if (total_mass_cap && std::abs(m - *total_mass_cap) > 1e-8)
        throw validation_error("total mass disagrees with declared F(inf)");
}

Measure Measure::point_mass(double x, double w) { return Measure({{x, w}}, std::nullopt); }

Measure Measure::from_atoms(std::vector<Atom> atoms) {
    return Measure(std::move(atoms), std::nullopt);
}

double Measure::cdf(double x) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x > x) break;
        acc += a.w;
    }
    if (density_)
        acc += std::visit([&](const auto& d) { return d.cdf(x); }, *density_);
    return acc;
}

double Measure::cdf_left(double x) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x >= x) break;
        acc += a.w;
    }
    if (density_)
        acc += std::visit([&](const auto& d) { return d.cdf(x); }, *density_);
    return acc;
}

double Measure::total_mass() const {
    double acc = 0.0;
    for (const Atom& a : atoms_) acc += a.w;
    if (density_)
        acc += std::visit([&](const auto& d) { return d.mass(); }, *density_);
    return acc;
}

double Measure::mean() const {
    if (!finite_mean_)
        throw validation_error("mean requires the finite_mean flag");
    double acc = 0.0;
    for (const Atom& a : atoms_) acc += a.w * a.x;
    if (density_)
        acc += std::visit([&](const auto& d) { return d.mean(); }, *density_);
    return acc;
}

double Measure::put_value(double k) const {
    double acc = 0.0;
    for (const Atom& a : atoms_)
        if (a.x < k) acc += a.w * (k - a.x);
    if (density_)
        acc += std::visit([&](const auto& d) { return d.put_value(k); }, *density_);
    return acc;
}

double Measure::call_value(double k) const {
    if (!finite_mean_)
        throw validation_error("call prices require the finite_mean flag");
    double acc = 0.0;
    for (const Atom& a : atoms_)
        if (a.x > k) acc += a.w * (a.x - k);
    if (density_)
        acc += std::visit([&](const auto& d) { return d.call_value(k); }, *density_);
    return acc;
}

double Measure::density_pdf(double x) const {
    if (!density_) return 0.0;
    return std::visit([&](const auto& d) { return d.pdf(x); }, *density_);
}

double Measure::upper_cut() const {
    double cut = 0.0;
    if (!atoms_.empty()) cut = atoms_.back().x;
    if (density_) {
        if (const auto* ln = std::get_if<LognormalDensity>(&*density_))
            cut = std::max(cut, ln->upper_cut());
        else
            cut = std::max(cut, std::get<TableDensity>(*density_).x.back());
    }
    return std::max(cut, 1.0);
}

double integrate(const std::function<double(double)>& f, const Measure& m,
                 const Interval& interval, const QuadOptions& opts,
                 std::span<const double> breakpoints) {
    double acc = 0.0;
    for (const Atom& a : m.atoms())
        if (interval.contains(a.x)) acc += a.w * f(a.x);
    if (m.density()) {
        double lo = std::max(interval.lo, 0.0);
        double hi = interval.hi;
        std::vector<double> bps(breakpoints.begin(), breakpoints.end());
        if (const auto* td = std::get_if<TableDensity>(&*m.density())) {
            lo = std::max(lo, td->x.front());
            hi = std::min(hi, td->x.back());
            bps.insert(bps.end(), td->x.begin(), td->x.end());
        } else {
            hi = std::min(hi, std::get<LognormalDensity>(*m.density()).upper_cut());
        }
        if (hi > lo) {
            auto integrand = [&](double x) { return f(x) * m.density_pdf(x); };
            acc += integrate(integrand, lo, hi, opts, bps).value;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// StieltjesMeasure
// ---------------------------------------------------------------------------

StieltjesMeasure::StieltjesMeasure(std::vector<Atom> atoms, std::optional<SignedDensity> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
    validate_atoms(atoms_, false);
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            td->validate();
        } else {
            const auto& cd = std::get<ConstantDensity>(*density_);
            if (!(cd.lo < cd.hi)) throw validation_error("constant density: empty support");
        }
    }
}

StieltjesMeasure StieltjesMeasure::from_atoms(std::vector<Atom> atoms) {
    return StieltjesMeasure(std::move(atoms), std::nullopt);
}

StieltjesMeasure StieltjesMeasure::lebesgue(double scale, double lo, double hi) {
    return StieltjesMeasure({}, ConstantDensity{scale, lo, hi});
}

StieltjesMeasure StieltjesMeasure::from_table(TableDensity table) {
    return StieltjesMeasure({}, SignedDensity{std::move(table)});
}

StieltjesMeasure StieltjesMeasure::from_measure(const Measure& m) {
    std::optional<SignedDensity> d;
    if (m.density()) {
        const auto* td = std::get_if<TableDensity>(&*m.density());
        if (!td)
            throw validation_error("from_measure: only tabulated densities convert exactly");
        d = *td;
    }
    return StieltjesMeasure(m.atoms(), std::move(d));
}

double StieltjesMeasure::mass(const Interval& interval) const {
    double acc = 0.0;
    for (const Atom& a : atoms_)
        if (interval.contains(a.x)) acc += a.w;
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            const double lo = std::max(interval.lo, td->x.front());
            const double hi = std::min(interval.hi, td->x.back());
            if (hi > lo) acc += td->cdf(hi) - td->cdf(lo);
        } else {
            const auto& cd = std::get<ConstantDensity>(*density_);
            const double lo = std::max(interval.lo, cd.lo);
            const double hi = std::min(interval.hi, cd.hi);
            if (hi > lo) {
                if (!std::isfinite(hi) && cd.value != 0.0)
                    throw validation_error("stieltjes measure: infinite mass on unbounded interval");
                acc += cd.value * (hi - lo);
            }
        }
    }
    return acc;
}

double StieltjesMeasure::total_variation(const Interval& interval) const {
    double acc = 0.0;
    for (const Atom& a : atoms_)
        if (interval.contains(a.x)) acc += std::abs(a.w);
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            const double lo = std::max(interval.lo, td->x.front());
            const double hi = std::min(interval.hi, td->x.back());
            if (hi > lo) acc += td->abs_mass(lo, hi);
        } else {
            const auto& cd = std::get<ConstantDensity>(*density_);
            const double lo = std::max(interval.lo, cd.lo);
            const double hi = std::min(interval.hi, cd.hi);
            if (hi > lo) {
                if (!std::isfinite(hi) && cd.value != 0.0)
                    throw validation_error("stieltjes measure: infinite variation on unbounded interval");
                acc += std::abs(cd.value) * (hi - lo);
            }
        }
    }
    return acc;
}

bool StieltjesMeasure::is_positive() const {
    for (const Atom& a : atoms_)
        if (a.w < 0.0) return false;
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            for (double v : td->f)
                if (v < 0.0) return false;
        } else if (std::get<ConstantDensity>(*density_).value < 0.0) {
            return false;
        }
    }
    return true;
}

bool StieltjesMeasure::has_unbounded_density() const {
    if (!density_) return false;
    const auto* cd = std::get_if<ConstantDensity>(&*density_);
    return cd && !std::isfinite(cd->hi) && cd->value != 0.0;
}

double StieltjesMeasure::support_hi() const {
    double hi = 0.0;
    if (!atoms_.empty()) hi = atoms_.back().x;
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_))
            hi = std::max(hi, td->x.back());
        else
            hi = std::max(hi, std::get<ConstantDensity>(*density_).hi);
    }
    return hi;
}

std::pair<StieltjesMeasure, StieltjesMeasure> StieltjesMeasure::split() const {
    std::vector<Atom> pos, neg;
    for (const Atom& a : atoms_) {
        if (a.w > 0.0)
            pos.push_back(a);
        else
            neg.push_back({a.x, -a.w});
    }
    std::optional<SignedDensity> dpos, dneg;
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            dpos = td->clipped(true);
            dneg = td->clipped(false);
        } else {
            const auto& cd = std::get<ConstantDensity>(*density_);
            if (cd.value >= 0.0)
                dpos = cd;
            else
                dneg = ConstantDensity{-cd.value, cd.lo, cd.hi};
        }
    }
    return {StieltjesMeasure(std::move(pos), std::move(dpos)),
            StieltjesMeasure(std::move(neg), std::move(dneg))};
}

double StieltjesMeasure::ramp_integral(double x, double lo_clip) const {
    double acc = 0.0;
    for (const Atom& a : atoms_)
        if (a.x > lo_clip && a.x < x) acc += a.w * (x - a.x);
    if (density_) {
        if (const auto* td = std::get_if<TableDensity>(&*density_)) {
            for (size_t i = 0; i + 1 < td->x.size(); ++i) {
                const double u = std::max(lo_clip, td->x[i]);
                const double v = std::min(x, td->x[i + 1]);
                if (v <= u) continue;
                double a, b;
                segment_coeffs(*td, i, a, b);
                acc += x * lin_mass(a, b, u, v) - lin_mean(a, b, u, v);
            }
        } else {
            const auto& cd = std::get<ConstantDensity>(*density_);
            const double u = std::max(lo_clip, cd.lo);
            const double v = std::min(x, cd.hi);
            if (v > u) acc += 0.5 * cd.value * ((x - u) * (x - u) - (x - v) * (x - v));
        }
    }
    return acc;
}

double stieltjes_integrate(const std::function<double(double)>& f,
                           const StieltjesMeasure& m, const Interval& interval,
                           const QuadOptions& opts, std::span<const double> breakpoints,
                           std::optional<double> upper_cut) {
    double acc = 0.0;
    for (const Atom& a : m.atoms())
        if (interval.contains(a.x)) acc += a.w * f(a.x);
    if (m.density()) {
        double lo = interval.lo, hi = interval.hi;
        std::vector<double> bps(breakpoints.begin(), breakpoints.end());
        if (const auto* td = std::get_if<TableDensity>(&*m.density())) {
            lo = std::max(lo, td->x.front());
            hi = std::min(hi, td->x.back());
            bps.insert(bps.end(), td->x.begin(), td->x.end());
            auto integrand = [&](double x) { return f(x) * td->pdf(x); };
            if (hi > lo) acc += integrate(integrand, lo, hi, opts, bps).value;
        } else {
            const auto& cd = std::get<ConstantDensity>(*m.density());
            lo = std::max(lo, cd.lo);
            hi = std::min(hi, cd.hi);
            if (!std::isfinite(hi)) {
                if (!upper_cut)
                    throw quadrature_error(
                        "stieltjes_integrate: unbounded density requires an upper cut");
                hi = *upper_cut;
            }
            auto integrand = [&](double x) { return f(x) * cd.value; };
            if (hi > lo) acc += integrate(integrand, lo, hi, opts, bps).value;
        }
    }
    return acc;
}

}  // namespace dfkit
