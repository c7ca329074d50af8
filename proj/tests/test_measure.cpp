#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dfkit/measure.hpp"
#include "fixtures.hpp"

using namespace dfkit;

TEST_CASE("cdf is right-continuous at atoms") {
    const Measure m = Measure::point_mass(1.0);
    CHECK(m.cdf(0.999) == 0.0);
    CHECK(m.cdf(1.0) == 1.0);
    CHECK(m.cdf_left(1.0) == 0.0);
    CHECK(m.cdf(-1.0) == 0.0);
}

TEST_CASE("two-atom cdf and mass") {
    const Measure m = fixtures::two_atom();
    CHECK(m.cdf(1.5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(m.cdf_left(2.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(m.total_mass() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(m.mean() == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(m.cdf(100.0) == doctest::Approx(0.9));
}

TEST_CASE("lognormal cdf matches the normal cdf directly") {
    const Measure m = fixtures::lognormal();
    // log S ~ N(-0.02, 0.04); P(S <= 1) = Phi(0.02 / 0.2) = Phi(0.1).
    CHECK(m.cdf(1.0) == doctest::Approx(norm_cdf(0.1)).epsilon(1e-12));
    CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mean() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cdf minus cdf_left recovers atom weights") {
    const Measure m = fixtures::mixture();
    CHECK(m.cdf(1.5) - m.cdf_left(1.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.cdf(1.0) - m.cdf_left(1.0) == doctest::Approx(0.0));
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(Measure::from_atoms({{2.0, 0.5}, {1.0, 0.4}}), validation_error);
    CHECK_THROWS_AS(Measure::from_atoms({{1.0, 0.4}, {1.0, 0.5}}), validation_error);
    CHECK_THROWS_AS(Measure::from_atoms({{1.0, -0.1}}), validation_error);
    CHECK_THROWS_AS(Measure({}, TableDensity{{0.0, 1.0}, {1.0, -1.0}}), validation_error);
    // declared total mass must agree
    CHECK_THROWS_AS(Measure({{1.0, 0.5}}, std::nullopt, true, 0.9), validation_error);
    CHECK_NOTHROW(Measure({{1.0, 0.5}}, std::nullopt, true, 0.5));
}

TEST_CASE("mean requires the finite_mean flag") {
    const Measure m({{1.0, 1.0}}, std::nullopt, false);
    CHECK_THROWS_AS(m.mean(), validation_error);
    CHECK_THROWS_AS(m.call_value(1.0), validation_error);
    CHECK_NOTHROW(m.put_value(1.0));
}

TEST_CASE("put/call closed forms against direct integration") {
    for (const Measure& m : fixtures::all()) {
        for (double k : {0.5, 1.0, 1.7, 3.0}) {
            auto put = [k](double x) { return std::max(k - x, 0.0); };
            auto call = [k](double x) { return std::max(x - k, 0.0); };
            const double bp[] = {k};
            CHECK(m.put_value(k) ==
                  doctest::Approx(integrate(put, m, positive_axis(), {}, bp)).epsilon(1e-10));
            CHECK(m.call_value(k) ==
                  doctest::Approx(integrate(call, m, positive_axis(), {}, bp)).epsilon(1e-10));
        }
    }
}

TEST_CASE("tabulated density: segment-exact moments") {
    // triangle density on [0, 2], peak 1 at x = 1: mass 1, mean 1
    const TableDensity tri{{0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}};
    const Measure m({}, tri);
    CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.mean() == doctest::Approx(1.0).epsilon(1e-14));
    // put value at the peak: int_0^1 (1-x) x dx = 1/6
    CHECK(m.put_value(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(m.call_value(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("stieltjes_integrate: spec'd examples") {
    const StieltjesMeasure atoms = StieltjesMeasure::from_atoms({{1.0, 0.4}, {2.0, 0.5}});
    auto one = [](double) { return 1.0; };
    CHECK(stieltjes_integrate(one, atoms, positive_axis()) == doctest::Approx(0.9));

    const StieltjesMeasure leb01 = StieltjesMeasure::lebesgue(1.0, 0.0, 1.0);
    auto id = [](double x) { return x; };
    CHECK(stieltjes_integrate(id, leb01, half_open(0.0, 1.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // f = call curve of delta_2, m = 2*Lebesgue on (0,inf) -> int x^2 d(delta_2) = 4
    const Measure d2 = Measure::point_mass(2.0);
    auto call2 = [&](double k) { return d2.call_value(k); };
    const StieltjesMeasure two_leb = StieltjesMeasure::lebesgue(2.0);
    CHECK(stieltjes_integrate(call2, two_leb, positive_axis(), {}, {}, 2.0) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("stieltjes_integrate is additive over adjacent half-open intervals") {
    const StieltjesMeasure m = StieltjesMeasure::from_atoms({{0.5, 0.2}, {1.0, -0.3}, {2.0, 0.4}});
    auto f = [](double x) { return 1.0 + x; };
    const double ab = stieltjes_integrate(f, m, half_open(0.0, 1.0));
    const double bc = stieltjes_integrate(f, m, half_open(1.0, 2.0));
    const double ac = stieltjes_integrate(f, m, half_open(0.0, 2.0));
    CHECK(ab + bc == doctest::Approx(ac).epsilon(1e-12));
    // endpoint flags matter: the atom at 1 belongs to (0,1], not (1,2]
    CHECK(ab == doctest::Approx(0.2 * 1.5 - 0.3 * 2.0).epsilon(1e-12));
}

TEST_CASE("monotone convergence along truncations") {
    const Measure m = fixtures::lognormal();
    auto g = [](double x) { return x; };
    const double full = integrate(g, m, positive_axis());
    double prev = -1.0;
    for (int n : {1, 2, 3, 5, 8}) {
        auto gn = [&, n](double x) { return x <= n ? x : 0.0; };
        const double bp[] = {static_cast<double>(n)};
        const double v = integrate(gn, m, positive_axis(), {}, bp);
        CHECK(v >= prev - 1e-12);
        CHECK(v <= full + 1e-10);
        prev = v;
    }
    CHECK(full - prev < 1e-6);  // the truncations exhaust the integral
}

TEST_CASE("jordan decomposition splits signs") {
    const StieltjesMeasure m(
        {{1.0, 0.5}, {2.0, -0.25}},
        TableDensity{{0.0, 1.0, 2.0}, {1.0, -1.0, 1.0}});
    const auto [pos, neg] = m.split();
    CHECK(pos.is_positive());
    CHECK(neg.is_positive());
    auto one = [](double) { return 1.0; };
    const double total = stieltjes_integrate(one, m, half_open(0.0, 3.0));
    const double p = stieltjes_integrate(one, pos, half_open(0.0, 3.0));
    const double n = stieltjes_integrate(one, neg, half_open(0.0, 3.0));
    CHECK(p - n == doctest::Approx(total).epsilon(1e-10));
    CHECK(m.total_variation(half_open(0.0, 3.0)) == doctest::Approx(p + n).epsilon(1e-10));
}

TEST_CASE("ramp_integral reproduces (x-k)^+ sums") {
    const StieltjesMeasure m = StieltjesMeasure::from_atoms({{0.5, 2.0}, {1.5, 1.0}});
    CHECK(m.ramp_integral(2.0) == doctest::Approx(2.0 * 1.5 + 1.0 * 0.5));
    CHECK(m.ramp_integral(0.25) == 0.0);
    // against a density: 2*Lebesgue gives x^2
    const StieltjesMeasure leb = StieltjesMeasure::lebesgue(2.0);
    for (double x : {0.3, 1.0, 2.7}) CHECK(leb.ramp_integral(x) == doctest::Approx(x * x).epsilon(1e-12));
}

TEST_CASE("interval endpoint flags control atom inclusion") {
    const Measure m = Measure::point_mass(1.0, 0.7);
    auto one = [](double) { return 1.0; };
    CHECK(integrate(one, m, {0.0, 1.0, false, true}) == doctest::Approx(0.7));
    CHECK(integrate(one, m, {0.0, 1.0, false, false}) == 0.0);
    CHECK(integrate(one, m, {1.0, 2.0, true, true}) == doctest::Approx(0.7));
    CHECK(integrate(one, m, {1.0, 2.0, false, true}) == 0.0);
}
