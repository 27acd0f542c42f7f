#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lgt/cex.hpp"
#include "lgt/error.hpp"
#include "lgt/quadrature.hpp"

using namespace lgt;
using std::numbers::pi;

TEST_CASE("adaptive cubature on smooth and singular integrands") {
    const CubatureResult a = integrate_2d([](double x, double y) { return std::exp(x + 2 * y); }, 0, 1, 0, 1);
    CHECK(a.converged);
    CHECK(a.value == doctest::Approx((std::exp(1.0) - 1) * (std::exp(2.0) - 1) / 2).epsilon(1e-12));
    const CubatureResult b = integrate_2d([](double, double y) { return 1.0 / std::sqrt(y); }, 0, 2, 0, 1);
    CHECK(b.converged);
    CHECK(b.value == doctest::Approx(4.0).epsilon(1e-8));
    const GaussRule g = gauss_legendre(8);
    CHECK(integrate_fixed(g, [](double x) { return std::pow(x, 15); }, 0, 1) == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("default sequence sum") {
    // partial sums converge slowly; the tail correction must bring the
    // value between the partial sum and partial sum + generous tail
    double partial = 0.0;
    for (int n = 1; n <= 1000; ++n) partial += 1.0 / (n * std::pow(std::log1p(n), 2));
    const double s = default_sequence_sum();
    CHECK(s > partial);
    CHECK(s < partial + 1.0 / std::log(1000.0));
    CHECK(s == doctest::Approx(partial + 1.0 / std::log(1001.5)).epsilon(1e-4));
}

TEST_CASE("default arc sequence") {
    const Domain d = Domain::disk(1.0);
    const ArcSystem one = build_arcs(d, 1);
    REQUIRE(one.arcs.size() == 2);
    CHECK(one.eps[0] == doctest::Approx(one.scale / std::pow(std::log(2.0), 2)));
    CHECK(one.arcs[0].plus);
    CHECK_FALSE(one.arcs[1].plus);
    CHECK(one.arcs[1].start == doctest::Approx(one.arcs[0].start + one.arcs[0].length));
    CHECK(one.arcs[0].length == one.arcs[1].length);

    const ArcSystem two = build_arcs(d, 2);
    REQUIRE(two.arcs.size() == 4);
    CHECK(two.arcs[0].plus);
    CHECK_FALSE(two.arcs[1].plus);
    CHECK_FALSE(two.arcs[2].plus);
    CHECK(two.arcs[3].plus);
    CHECK(two.arcs[2].pair == 2);

    const ArcSystem many = build_arcs(d, 500);
    double used = 0.0;
    for (std::size_t k = 0; k < many.arcs.size(); ++k) {
        used += many.arcs[k].length;
        if (k > 0) CHECK(many.arcs[k].start == doctest::Approx(many.arcs[k - 1].start + many.arcs[k - 1].length));
    }
    CHECK(used <= d.perimeter() / 2);
    // eps_n does not depend on how many pairs were built
    CHECK(many.eps[0] == one.eps[0]);
    CHECK_THROWS_AS(build_arcs(Domain::ellipse(2, 1), 3), SchemaError);
    CHECK_THROWS_AS(build_arcs(d, 0), SchemaError);
}

TEST_CASE("custom arcs") {
    const Domain d = Domain::disk(1.0);
    const ArcSystem a = build_arcs(d, std::vector<double>{0.1});
    REQUIRE(a.arcs.size() == 2);
    CHECK(a.arcs[0].length == 0.1);
    CHECK(a.arcs[1].length == 0.1);
    CHECK(a.junction(1) == doctest::Approx(0.1));
    CHECK_THROWS_AS(build_arcs(d, std::vector<double>{2.0, 1.5}), SchemaError);
}

TEST_CASE("p = 1 pair value is the pair transport cost") {
    const Domain d = Domain::disk(1.0);
    for (double e : {0.02, 0.05, 0.1, 0.4}) {
        const ArcSystem a = build_arcs(d, std::vector<double>{e});
        const Flagged v = exact_pair_lp(a, 1, 1.0);
        CHECK_FALSE(v.infinite);
        CHECK(v.value == doctest::Approx(2.0 * (1.0 - std::cos(e))).epsilon(1e-8));
        const PairProblem pp = solve_pair(a, 1, 200);
        CHECK(std::abs(density_mass(pp.plan) - v.value) <= 0.01 * v.value);
        if (e <= 0.1) CHECK(v.value == doctest::Approx(e * e).epsilon(0.01));
    }
}

TEST_CASE("closed forms on the circle chart") {
    // sigma = R/s, so the p-integral is int_0^smax 2 R^p s^(2-p) / sqrt(R^2 - s^2) ds
    const Domain d = Domain::disk(2.0);
    const ArcSystem a = build_arcs(d, std::vector<double>{0.3});
    const double R = 2.0, smax = R * std::sin(0.3 / R);
    // p = 2: 2 R^2 asin(smax / R) = 2 R^2 * eps / R
    CHECK(exact_pair_lp(a, 1, 2.0).value == doctest::Approx(2.0 * R * 0.3).epsilon(1e-8));
    // p = 2.5 compared with a direct fine quadrature in s
    double ref = 0.0;
    const int K = 400000;
    for (int k = 0; k < K; ++k) {
        // substitution s = smax w^2 keeps the midpoint rule accurate
        const double w = (k + 0.5) / K, s = smax * w * w;
        ref += 2.0 * std::pow(R, 2.5) * std::pow(s, -0.5) / std::sqrt(R * R - s * s) * 2.0 * smax * w / K;
    }
    CHECK(exact_pair_lp(a, 1, 2.5).value == doctest::Approx(ref).epsilon(1e-6));
    CHECK(exact_pair_lp(a, 1, 3.0).infinite);
    CHECK(exact_pair_lp(a, 1, 3.5).infinite);
}

TEST_CASE("solver reproduces the reflection map") {
    const Domain d = Domain::disk(1.0);
    const ArcSystem a = build_arcs(d, 6);
    for (int n = 1; n <= 6; ++n) {
        const PairProblem pp = solve_pair(a, n, 50);
        CHECK(reflection_defect(a, n, pp.plan) <= 1e-9 * a.eps[n - 1]);
        CHECK(check_noncrossing(pp.plan).empty());
    }
}

TEST_CASE("scaling law of the exact pair values") {
    const Domain d = Domain::disk(1.0);
    const ArcSystem a = build_arcs(d, 200);
    for (double p : {2.0, 2.5}) {
        double lo = 1e300, hi = 0.0;
        for (int n = 1; n <= 200; n += 7) {
            const double r = exact_pair_lp(a, n, p).value / std::pow(a.eps[n - 1], 3.0 - p);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo <= 10.0);
    }
}

TEST_CASE("run_counterexample in both modes") {
    const Domain d = Domain::disk(1.0);
    const ArcSystem a = build_arcs(d, 4);
    CexOptions opt;
    opt.p = 2.0;
    const CexReport exact = run_counterexample(a, opt);
    REQUIRE(exact.per_pair.size() == 4);
    CHECK_FALSE(exact.partial_sum.infinite);
    CHECK(exact.ratio > 0.0);

    opt.p = 3.0;
    const CexReport div = run_counterexample(a, opt);
    CHECK(div.divergent);
    CHECK(div.partial_sum.infinite);
    CHECK(div.reference_sum == doctest::Approx(4.0));

    opt.mode = CexMode::grid;
    opt.grid = 128;
    opt.atoms = 40;
    const CexReport grid = run_counterexample(a, opt);
    CHECK(grid.divergent);
    CHECK_FALSE(grid.partial_sum.infinite);
    CHECK(grid.partial_sum.value > 0.0);

    opt.p = 1.0;
    const CexReport mass = run_counterexample(a, opt);
    opt.mode = CexMode::exact;
    const CexReport mass_exact = run_counterexample(a, opt);
    CHECK(mass.partial_sum.value == doctest::Approx(mass_exact.partial_sum.value).epsilon(0.01));
}
