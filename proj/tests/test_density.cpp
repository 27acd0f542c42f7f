#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "instances.hpp"
#include "lgt/density.hpp"
#include "lgt/error.hpp"

using namespace lgt;
using namespace lgt::testing;
using std::numbers::pi;

namespace {

TransportPlan single_pair(const Norm& norm = Norm::euclidean()) {
    TransportPlan plan;
    plan.sources = {{1.0, 0.0}};
    plan.targets = {{-1.0, 0.0}};
    plan.source_mass = plan.target_mass = {1.0};
    plan.entries = {{0, 0, 1.0}};
    plan.norm = norm;
    plan.cost = norm({-2.0, 0.0});
    return plan;
}

}  // namespace

TEST_CASE("grid covers the domain box") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    const GridSpec g = grid_for(d, 100);
    CHECK(g.nx == 100);
    CHECK(g.ny == 50);
    const Box box = d.bounding_box();
    CHECK(g.origin.x <= box.lo.x);
    CHECK(g.origin.y <= box.lo.y);
    CHECK(g.origin.x + g.nx * g.cell >= box.hi.x);
    CHECK(g.origin.y + g.ny * g.cell >= box.hi.y);
    const GridSpec e = grid_for(d, 64, 64);
    CHECK(e.nx == 64);
    CHECK(e.ny == 64);
    CHECK(e.origin.x + e.nx * e.cell >= box.hi.x);
}

TEST_CASE("interpolate_ft examples") {
    const auto ft = interpolate_ft(single_pair(), 0.5);
    REQUIRE(ft.size() == 1);
    CHECK(ft[0].point.x == doctest::Approx(0.0));
    CHECK(ft[0].mass == doctest::Approx(2.0));
    const auto f0 = interpolate_ft(single_pair(), 0.0);
    CHECK(f0[0].point.x == 1.0);
    CHECK(f0[0].mass == doctest::Approx(2.0));

    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    BoundaryMeasure fp({{0.0, 1.0, 0.0}, {pi / 2, 1.0, 0.0}}, per);
    BoundaryMeasure fm({{pi, 1.0, 0.0}, {3 * pi / 2, 1.0, 0.0}}, per);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), fp, fm);
    const auto mid = interpolate_ft(plan, 0.5);
    REQUIRE(mid.size() == 2);
    double total = 0.0;
    for (const auto& a : mid) {
        CHECK(a.mass == doctest::Approx(std::sqrt(2.0)));
        total += a.mass;
    }
    CHECK(total == doctest::Approx(plan.cost).epsilon(1e-12));
    CHECK_THROWS_AS(interpolate_ft(plan, 1.5), SchemaError);
}

TEST_CASE("segment traversal reports exact lengths") {
    GridSpec g;
    g.origin = {0.0, 0.0};
    g.cell = 1.0;
    g.nx = g.ny = 4;
    std::map<std::size_t, double> got;
    deposit_segment(g, {0.5, 0.5}, {2.5, 1.5}, [&](std::size_t i, double l) { got[i] += l; });
    // slope 1/2: crosses x = 1, x = 2 and y = 1 (at x = 1.5)
    const double unit = std::sqrt(1.25);  // length per unit of x
    CHECK(got.at(g.index(0, 0)) == doctest::Approx(0.5 * unit));
    CHECK(got.at(g.index(1, 0)) == doctest::Approx(0.5 * unit));
    CHECK(got.at(g.index(1, 1)) == doctest::Approx(0.5 * unit));
    CHECK(got.at(g.index(2, 1)) == doctest::Approx(0.5 * unit));
    CHECK(got.size() == 4);

    got.clear();
    deposit_segment(g, {3.5, 3.5}, {0.5, 0.5}, [&](std::size_t i, double l) { got[i] += l; });
    CHECK(got.size() == 4);  // through the grid corners, one cell per diagonal step
    double total = 0.0;
    for (auto& [k, v] : got) total += v;
    CHECK(total == doctest::Approx(3.0 * std::sqrt(2.0)));
}

TEST_CASE("single pair deposits") {
    const Domain d = Domain::disk(1.0);
    for (int n : {7, 64, 301}) {
        const GridSpec g = grid_for(d, n);
        const GridField half = deposit_partial_density(single_pair(), 0.5, g);
        CHECK(half.integral() == doctest::Approx(1.0).epsilon(1e-12));
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                if (half.at(ix, iy) == 0.0) continue;
                const Vec2 c = g.center(ix, iy);
                CHECK(c.x >= -g.cell);
                CHECK(std::abs(c.y) <= g.cell);
            }
        }
        CHECK(deposit_partial_density(single_pair(), 1.0, g).integral() == doctest::Approx(2.0).epsilon(1e-12));
        for (double tau : {0.25, 0.5, 1.0}) {
            CHECK(deposit_partial_density(single_pair(Norm::lq(4.0)), tau, g).integral() ==
                  doctest::Approx(2.0 * tau).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(deposit_partial_density(single_pair(), 0.0, grid_for(d, 8)), SchemaError);
    CHECK_THROWS_AS(deposit_partial_density(single_pair(), 1.1, grid_for(d, 8)), SchemaError);
}

TEST_CASE("lp_norm examples") {
    GridSpec g;
    g.cell = 1.0;
    g.nx = g.ny = 2;
    const GridField f(g, 0.5);
    CHECK(lp_norm(f, 2.0) == doctest::Approx(1.0));
    CHECK(lp_norm(f, 1.0) == doctest::Approx(2.0));
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(0.5));
}

TEST_CASE("L^p bound factors") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    const double L = 0.1;
    BoundaryMeasure fp({{0.0, L, L}}, per);
    BoundaryMeasure fm({{pi, L, L}}, per);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), fp, fm);

    const BoundFactors p2 = lp_bound_factors(plan, fp, 2.0, 0.5);
    CHECK(p2.time_integral.value == doctest::Approx(std::log(2.0)));
    CHECK(p2.data_integral.value == doctest::Approx(L));  // density 1, D^0

    const BoundFactors p15 = lp_bound_factors(plan, fp, 1.5, 0.5);
    CHECK(p15.data_integral.value == doctest::Approx(L * std::sqrt(2.0)));
    CHECK(p15.time_integral.value == doctest::Approx((1.0 - std::sqrt(0.5)) / 0.5));

    CHECK(lp_bound_factors(plan, fp, 2.0, 1.0).time_integral.infinite);
    CHECK(lp_bound_factors(plan, fp, 3.0, 1.0).time_integral.infinite);
    CHECK_FALSE(lp_bound_factors(plan, fp, 1.5, 1.0).time_integral.infinite);
    CHECK_THROWS_AS(lp_bound_factors(plan, fp, 1.0, 0.5), SchemaError);

    BoundaryMeasure jp({{0.0, 1.0, 0.0}}, per), jm({{pi, 1.0, 0.0}}, per);
    const TransportPlan jplan = solve_kantorovich(d, Norm::euclidean(), jp, jm);
    CHECK(lp_bound_factors(jplan, jp, 1.5, 0.5).data_integral.infinite);

    // p = 2 data integral is the quadrature of (f+)^2
    const BoundaryDatum g = BoundaryDatum::from_function([](double s) { return std::cos(s); }, per, 2000);
    const SignedMeasure f = tangential_derivative(g, 1);
    const TransportPlan cplan = solve_kantorovich(d, Norm::euclidean(), f.plus, f.minus);
    CHECK(lp_bound_factors(cplan, f.plus, 2.0, 0.5).data_integral.value == doctest::Approx(pi / 2).epsilon(1e-4));
}

TEST_CASE("density_mass equals the plan cost") {
    CHECK(density_mass(single_pair()) == doctest::Approx(2.0));
    CHECK(density_mass(TransportPlan{}) == 0.0);
    Rng rng(4);
    const Domain d = Domain::ellipse(2.0, 1.0);
    const AtomicInstance inst = random_weighted_instance(rng, d, 30, 40);
    const TransportPlan plan = solve_kantorovich(d, Norm::lq(3.0), inst.plus, inst.minus);
    CHECK(density_mass(plan) == plan.cost);
}

TEST_CASE("mass identity, splitting identity and support inside the domain") {
    Rng rng(12);
    for (const Domain& d : convex_domains()) {
        for (const Norm& nrm : strict_norms()) {
            const AtomicInstance inst = random_weighted_instance(rng, d, 25, 35);
            const TransportPlan plan = solve_kantorovich(d, nrm, inst.plus, inst.minus);
            for (int n : {33, 128}) {
                const GridSpec g = grid_for(d, n);
                const GridField full = deposit_partial_density(plan, 1.0, g);
                CHECK(std::abs(full.integral() - plan.cost) <= 1e-9 * plan.cost);
                const GridField fwd = deposit_partial_density(plan, 0.5, g);
                const GridField back = deposit_partial_density(reversed(plan), 0.5, g);
                CHECK(std::abs(fwd.integral() - 0.5 * plan.cost) <= 1e-9 * plan.cost);
                double worst = 0.0;
                for (std::size_t k = 0; k < full.values.size(); ++k) {
                    const double diff = std::abs(fwd.values[k] + back.values[k] - full.values[k]);
                    worst = std::max(worst, diff / std::max(1.0, full.values[k]));
                }
                CHECK(worst <= 1e-9);
                // every charged cell touches the domain: some corner or the
                // center lies within half a cell diagonal of the closure
                for (int iy = 0; iy < g.ny; ++iy) {
                    for (int ix = 0; ix < g.nx; ++ix) {
                        if (full.at(ix, iy) == 0.0) continue;
                        bool near = false;
                        const Vec2 c = g.center(ix, iy);
                        for (double ox : {-0.5, 0.0, 0.5}) {
                            for (double oy : {-0.5, 0.0, 0.5}) {
                                const Vec2 q{c.x + ox * g.cell * (1 - 1e-9), c.y + oy * g.cell * (1 - 1e-9)};
                                near = near || d.contains(q);
                            }
                        }
                        if (!near) {
                            // tiny corner clips: accept cells within one diagonal of a boundary sample
                            double best = 1e300;
                            for (int k = 0; k < 2000; ++k) {
                                best = std::min(best, length(d.point(d.perimeter() * k / 2000.0) - c));
                            }
                            near = best <= g.cell;
                        }
                        CHECK(near);
                    }
                }
            }
        }
    }
}

TEST_CASE("bilinear sampling reproduces affine fields") {
    const Domain d = Domain::disk(1.0);
    const GridSpec g = grid_for(d, 40);
    GridField f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const Vec2 c = g.center(ix, iy);
            f.at(ix, iy) = 2.0 * c.x - c.y + 0.25;
        }
    for (Vec2 p : {Vec2{0.1, 0.2}, Vec2{-0.73, 0.4}, Vec2{0.0, -0.9}}) {
        CHECK(f.sample(p) == doctest::Approx(2.0 * p.x - p.y + 0.25));
    }
}
