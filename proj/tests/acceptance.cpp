// Acceptance gate: one PASS/FAIL line per criterion, pinned tolerances.
// Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dfkit/oracle.hpp"
#include "dfkit/reconstruct.hpp"
#include "dfkit/return_space.hpp"
#include "dfkit/static_replication.hpp"
#include "fixtures.hpp"

using namespace dfkit;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %d (%s): %s%s%s\n", idx, name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double k = lo; k <= hi + 1e-12; k += step) g.push_back(k);
    return g;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

// --- 1: CDF inversion brackets ------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    const Measure ln = fixtures::lognormal();
    for (double h : {0.1, 0.05, 0.025}) {
        const std::vector<double> ks = grid(0.0, 4.0, h);
        const CdfEstimate est = cdf_from_puts(put_curve(ln, ks));
        double err = 0.0, bound = 0.0;
        for (size_t i = 0; i < est.strikes.size(); ++i)
            err = std::max(err, std::abs(est.f_hat[i] - ln.cdf(est.strikes[i])));
        for (size_t i = 0; i + 1 < ks.size(); ++i)
            bound = std::max(bound, ln.cdf(ks[i + 1]) - ln.cdf(ks[i]));
        if (err > bound) {
            ok = false;
            detail = "lognormal h=" + std::to_string(h) + " error above bracket bound";
        }
    }

    const Measure atoms = fixtures::two_atom();
    const CdfEstimate est = cdf_from_puts(put_curve(atoms, grid(0.0, 3.0, 0.5)));
    for (size_t i = 0; i < est.strikes.size(); ++i)
        if (std::abs(est.f_hat[i] - atoms.cdf(est.strikes[i])) > 1e-12) {
            ok = false;
            detail = "two-atom grid not exact";
        }

    const double dt = seconds_since(t0);
    if (dt >= 1.0) {
        ok = false;
        detail = "runtime " + std::to_string(dt) + "s";
    }
    report(1, "cdf inversion bracket + atom exactness", ok, detail);
}

// --- 2: convex pricing formula -----------------------------------------------

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    struct Payoff {
        std::string name;
        DCPayoff g;
        bool atomic_curvature;
    };
    std::vector<Payoff> payoffs;
    {
        DCPayoff sq;
        sq.curvature = StieltjesMeasure::lebesgue(2.0);
        payoffs.push_back({"x^2", sq, false});

        DCPayoff call1;
        call1.curvature = StieltjesMeasure::from_atoms({{1.0, 1.0}});
        payoffs.push_back({"(x-1)^+", call1, true});

        TableDensity quartic;
        for (double k = 0.0; k <= 8.0 + 1e-12; k += 0.1) {
            quartic.x.push_back(k);
            quartic.f.push_back(12.0 * k * k);
        }
        DCPayoff q;
        q.curvature = StieltjesMeasure::from_table(quartic);
        payoffs.push_back({"x^4-like tabulated", q, false});

        auto expm = [](double x) { return std::exp(x) - 1.0 - x; };
        DCPayoff e;
        e.curvature =
            StieltjesMeasure::from_table(curvature_from_evaluator(expm, grid(0.05, 8.0, 0.05)));
        payoffs.push_back({"exp-like tabulated", e, false});
    }

    const std::vector<std::pair<std::string, Measure>> measures = {
        {"two-atom", fixtures::two_atom()},
        {"three-atom", fixtures::three_atom()},
        {"lognormal", fixtures::lognormal()},
        {"mixture", fixtures::mixture()},
    };

    double worst = 0.0;
    for (const auto& [mname, m] : measures) {
        const PriceCurve c = call_curve(m, grid(0.0, 6.0, 0.25));
        const bool atomic_measure = !m.density();
        for (const Payoff& p : payoffs) {
            std::vector<double> bps;
            for (const Atom& a : p.g.curvature.atoms()) bps.push_back(a.x);
            const double truth =
                oracle_price(m, [&](double x) { return p.g.reconstruction(x); }, {}, bps).price;
            const double got = price_convex(c, p.g).value;
            const double tol = (atomic_measure && p.atomic_curvature) ? 1e-12 : 1e-8;
            const double err = std::abs(got - truth);
            worst = std::max(worst, err);
            if (err > tol) {
                ok = false;
                detail = p.name + " under " + mname + ": |err|=" + sci(err);
            }
        }
    }

    const double dt = seconds_since(t0);
    if (dt >= 5.0) {
        ok = false;
        detail = "runtime " + std::to_string(dt) + "s";
    }
    if (ok) detail = "worst error " + sci(worst) + " over 16 cases";
    report(2, "convex pricing vs oracle, 16 cases", ok, detail);
}

// --- 3: piecewise-DC boundary terms ------------------------------------------

void criterion_3() {
    bool ok = true;
    std::string detail;

    auto digital = [](double a, double b) {
        PiecewiseDCPayoff g;
        g.pieces.push_back(make_piece(a, b, 1.0, 0.0, {}));
        return g;
    };
    const std::vector<std::pair<std::string, Measure>> cases = {
        {"atom at a", Measure::from_atoms({{1.0, 0.4}, {2.5, 0.3}})},
        {"atom inside", Measure::point_mass(1.5)},
        {"atom at b", Measure::from_atoms({{0.5, 0.2}, {2.0, 0.6}})},
    };
    for (const auto& [name, m] : cases) {
        const PriceCurve c = call_curve(m, grid(0.0, 6.0, 0.25));
        const double want = m.cdf_left(2.0) - m.cdf_left(1.0);
        const double got = price_piecewise_dc(c, digital(1.0, 2.0)).value;
        if (std::abs(got - want) > 1e-10) {
            ok = false;
            detail = "digital with " + name + ": err " + sci(std::abs(got - want));
        }
    }

    PiecewiseDCPayoff xsq;
    xsq.pieces.push_back(make_piece(1.0, 2.0, 1.0, 2.0, StieltjesMeasure::lebesgue(2.0, 1.0, 2.0)));
    const Measure m2 = Measure::from_atoms({{1.0, 0.4}, {1.5, 0.2}});
    const PriceCurve c2 = call_curve(m2, grid(0.0, 6.0, 0.25));
    const double got = price_piecewise_dc(c2, xsq).value;
    if (std::abs(got - 0.85) > 1e-8) {
        ok = false;
        detail = "x^2 1_{[1,2)}: got " + std::to_string(got) + " want 0.85";
    }
    report(3, "piecewise-DC digitals and localized x^2", ok, detail);
}

// --- 4: put-spread indicator bound -------------------------------------------

void criterion_4() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(991);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    const auto ms = fixtures::all();
    for (int trial = 0; trial < 20; ++trial) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-3) b = a + 1e-3;
        const Measure& m = ms[static_cast<size_t>(trial) % ms.size()];
        const Portfolio spread = put_spread_indicator(a, b);
        auto indicator = [a](double x) { return x <= a ? 1.0 : 0.0; };
        const double bp[] = {a, b};
        const auto [l1, price_err] = l1_approximation_report(indicator, spread, m, bp);
        if (l1 > m.cdf(b) - m.cdf(a) + 1e-10) {
            ok = false;
            detail = "trial " + std::to_string(trial) + " exceeds the F(b)-F(a) bound";
        }
        (void)price_err;
    }
    report(4, "put-spread L1 bound on 20 random triples", ok, detail);
}

// --- 5: monotone dyadic call portfolios --------------------------------------

void criterion_5() {
    bool ok = true;
    std::string detail;

    DCPayoff sq;
    sq.curvature = StieltjesMeasure::lebesgue(2.0);
    const Measure m = fixtures::lognormal();
    const PriceCurve c = call_curve(m, grid(0.0, 6.0, 0.25));
    const double reference = price_convex(c, sq).value;

    double prev = -1e300;
    double level8 = 0.0;
    for (int level = 3; level <= 8; ++level) {
        const double v = portfolio_price(dyadic_call_portfolio(sq, level), m);
        if (v < prev - 1e-12) {
            ok = false;
            detail = "prices not nondecreasing at level " + std::to_string(level);
        }
        prev = v;
        if (level == 8) level8 = v;
    }

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 8.0);
    const Portfolio p8 = dyadic_call_portfolio(sq, 8);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        if (p8.payoff(x) > x * x + 1e-12) {
            ok = false;
            detail = "undershoot violated at x=" + std::to_string(x);
        }
    }

    const double gap = std::abs(level8 - reference);
    if (gap > 1e-3) {
        ok = false;
        detail = "level-8 gap to price_convex is " + sci(gap) +
                 " (> 1e-3): the dyadic partition of (0, 8] into 256 cells has mesh " +
                 "8/256 = 0.03125, and the one-cell undershoot near 0 already costs " +
                 "~mesh*C(0)";
    }
    report(5, "dyadic portfolio monotone closure", ok, detail);
}

// --- 6: curve property and parity suites -------------------------------------

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (const Measure& m : fixtures::all()) {
        const std::vector<double> ks = grid(0.0, 6.0, 0.25);
        const PriceCurve p = put_curve(m, ks);
        const PriceCurve c = call_curve(m, ks);
        for (size_t i = 0; i + 1 < ks.size(); ++i) {
            if (p.values[i + 1] < p.values[i] - 1e-12) ok = false, detail = "put monotone";
            if (c.values[i + 1] > c.values[i] + 1e-12) ok = false, detail = "call monotone";
        }
        for (size_t i = 1; i + 1 < ks.size(); ++i) {
            if (p.values[i] > 0.5 * (p.values[i - 1] + p.values[i + 1]) + 1e-12)
                ok = false, detail = "put convexity";
            if (c.values[i] > 0.5 * (c.values[i - 1] + c.values[i + 1]) + 1e-12)
                ok = false, detail = "call convexity";
        }
        for (size_t i = 0; i < ks.size(); ++i)
            if (p.values[i] > ks[i] * m.cdf(ks[i]) + 1e-12)
                ok = false, detail = "P(k) <= k F(k)";
        if (std::abs(c.values.front() - m.mean()) > 1e-12) ok = false, detail = "C(0) = mean";
        for (double g : parity_gap(p, c, m.total_mass(), m.mean()))
            if (std::abs(g) > 1e-9) ok = false, detail = "parity residual";
    }
    report(6, "curve properties and parity across fixtures", ok, detail);
}

// --- 7: log-return recovery --------------------------------------------------

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    auto gaussian = [](double x) { return norm_pdf(x); };
    // log S ~ N(0,1) corresponds to S0 = e^{1/2}, sigma = 1, T = 1
    const double truth = bs_put(std::exp(0.5), 1.0, 1.0, 1.0);

    const std::vector<int> orders{0, 4, 8, 16};
    const std::vector<double> k1s{0.5, 0.25, 0.1, 0.05};
    const RecoveryResult r = recover_put(gaussian, 1.0, orders, k1s);

    const auto& last_row = r.table.back();
    for (size_t j = 1; j < last_row.size(); ++j)
        if (std::abs(last_row[j] - truth) > std::abs(last_row[j - 1] - truth) + 1e-9) {
            ok = false;
            detail = "final row not monotone-improving in k1";
        }
    for (size_t i = 1; i < r.table.size(); ++i)
        if (std::abs(r.table[i].back() - truth) >
            std::abs(r.table[i - 1].back() - truth) + 1e-9) {
            ok = false;
            detail = "final column not monotone-improving in order";
        }
    if (std::abs(r.estimate - truth) > 1e-3) {
        ok = false;
        detail = "corner error " + sci(std::abs(r.estimate - truth));
    }
    if (!(r.correction < 0.1 * truth)) {
        ok = false;
        detail = "correction term " + sci(r.correction) + " not below 10% of P(k2)";
    }

    const double dt = seconds_since(t0);
    if (dt >= 30.0) {
        ok = false;
        detail = "runtime " + std::to_string(dt) + "s";
    }
    if (ok)
        detail = "corner error " + sci(std::abs(r.estimate - truth)) +
                 ", correction " + sci(r.correction);
    report(7, "theta-spread put recovery", ok, detail);
}

// --- 8: tail-decay limits ----------------------------------------------------

void criterion_8() {
    bool ok = true;
    std::string detail;
    DCPayoff identity;
    identity.slope0 = 1.0;
    identity.evaluator = [](double x) { return x; };
    const std::vector<double> a_grid{2.0, 4.0, 6.0, 8.0, 10.0};
    const auto rows = tail_decay_report(fixtures::lognormal(), identity, a_grid);
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].payoff_tail > rows[i - 1].payoff_tail) ok = false, detail = "payoff column";
        if (rows[i].slope_tail > rows[i - 1].slope_tail) ok = false, detail = "slope column";
    }
    if (rows.back().payoff_tail >= 1e-6 || rows.back().slope_tail >= 1e-6) {
        ok = false;
        detail = "tail entries not below 1e-6";
    }
    report(8, "tail-decay columns", ok, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
