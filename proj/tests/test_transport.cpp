#include <cmath>
#include <numbers>

#include "doctest.h"
#include "instances.hpp"
#include "lgt/error.hpp"
#include "lgt/transport.hpp"

using namespace lgt;
using namespace lgt::testing;
using std::numbers::pi;

namespace {

BoundaryMeasure dirac(std::initializer_list<double> s, double per) {
    std::vector<Atom> atoms;
    for (double x : s) atoms.push_back({x, 1.0, 0.0});
    return BoundaryMeasure(atoms, per);
}

void check_marginals(const TransportPlan& plan) {
    std::vector<double> row(plan.sources.size(), 0.0), col(plan.targets.size(), 0.0);
    for (const auto& e : plan.entries) {
        CHECK(e.mass > 0.0);
        row[e.i] += e.mass;
        col[e.j] += e.mass;
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
        CHECK(std::abs(row[i] - plan.source_mass[i]) <= 1e-10 * plan.source_mass[i]);
    }
    for (std::size_t j = 0; j < col.size(); ++j) {
        CHECK(std::abs(col[j] - plan.target_mass[j]) <= 1e-10 * plan.target_mass[j]);
    }
    double cost = 0.0;
    for (const auto& e : plan.entries) cost += e.mass * plan.entry_cost(e);
    CHECK(std::abs(cost - plan.cost) <= 1e-12 * std::max(1.0, plan.cost));
    CHECK(plan.entries.size() <= plan.sources.size() + plan.targets.size() - 1);
}

}  // namespace

TEST_CASE("single pair across the unit disk") {
    const Domain d = Domain::disk(1.0);
    const TransportPlan plan =
        solve_kantorovich(d, Norm::euclidean(), dirac({0.0}, d.perimeter()), dirac({pi}, d.perimeter()));
    REQUIRE(plan.entries.size() == 1);
    CHECK(plan.cost == doctest::Approx(2.0));
    const DualPotentials pots = dual_potentials(plan);
    CHECK(pots.phi_source[0] == doctest::Approx(2.0));
    CHECK(pots.phi_target[0] == doctest::Approx(0.0));
    CHECK(std::abs(duality_gap(plan, pots)) < 1e-12);
    const Displacements disp = displacement_lengths(plan);
    CHECK(disp.length[0] == doctest::Approx(2.0));
    CHECK_FALSE(disp.any_split);
}

TEST_CASE("two by two instance picks the short matching") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    const auto fp = dirac({0.0, pi / 2}, per);
    const auto fm = dirac({pi, 3 * pi / 2}, per);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), fp, fm);
    CHECK(plan.cost == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(plan.entries.size() == 2);
    CHECK(plan.entries[0].i == 0);
    CHECK(plan.entries[0].j == 1);  // 0 -> 3pi/2
    CHECK(plan.entries[1].i == 1);
    CHECK(plan.entries[1].j == 0);  // pi/2 -> pi
    const DualPotentials pots = dual_potentials(plan);
    for (const auto& e : plan.entries) {
        CHECK(pots.phi_source[e.i] - pots.phi_target[e.j] == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK(max_dual_violation(plan, pots) <= 1e-8);
    const Displacements disp = displacement_lengths(plan);
    CHECK(disp.length[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(disp.length[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(check_noncrossing(plan).empty());

    const TransportPlan brute = brute_force_plan(d, Norm::euclidean(), fp, fm);
    CHECK(brute.cost == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("forced pairs") {
    Rng rng(3);
    for (const Domain& d : convex_domains()) {
        const double per = d.perimeter();
        const double a = rng.uniform(0.0, per), b = rng.uniform(0.0, per);
        const TransportPlan plan = solve_kantorovich(d, Norm::lq(3.0), dirac({a}, per), dirac({b}, per));
        CHECK(plan.cost == doctest::Approx(chord_cost(Norm::lq(3.0), d, a, b)).epsilon(1e-14));
        const TransportPlan brute = brute_force_plan(d, Norm::lq(3.0), dirac({a}, per), dirac({b}, per));
        CHECK(brute.cost == doctest::Approx(plan.cost).epsilon(1e-14));
    }
}

TEST_CASE("three sources on the upper semicircle against their reflections") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    const auto fp = dirac({pi / 4, pi / 2, 3 * pi / 4}, per);
    const auto fm = dirac({2 * pi - pi / 4, 3 * pi / 2, 2 * pi - 3 * pi / 4}, per);
    const TransportPlan brute = brute_force_plan(d, Norm::euclidean(), fp, fm);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), fp, fm);
    CHECK(plan.cost == doctest::Approx(brute.cost).epsilon(1e-12));
    // vertical chords: 2 sin(pi/4) * 2 + 2
    CHECK(brute.cost == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("brute force rejects oversize or unequal input") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    std::vector<Atom> nine;
    for (int k = 0; k < 9; ++k) nine.push_back({0.1 * k, 1.0, 0.0});
    BoundaryMeasure big(nine, per);
    CHECK_THROWS_AS(brute_force_plan(d, Norm::euclidean(), big, big), SchemaError);
    BoundaryMeasure uneq({{0.0, 1.0, 0.0}, {1.0, 2.0, 0.0}}, per);
    CHECK_THROWS_AS(brute_force_plan(d, Norm::euclidean(), uneq, uneq), SchemaError);
}

TEST_CASE("mass imbalance is rejected") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    BoundaryMeasure a({{0.0, 1.0, 0.0}}, per), b({{1.0, 1.1, 0.0}}, per);
    CHECK_THROWS_AS(solve_kantorovich(d, Norm::euclidean(), a, b), InfeasibleError);
    CHECK_THROWS_AS(solve_kantorovich(d, Norm::euclidean(), a, BoundaryMeasure({}, per)),
                    InfeasibleError);
}

TEST_CASE("solver agrees with enumeration on random unit instances") {
    Rng rng(11);
    const std::vector<Domain> domains{Domain::disk(1.0), Domain::ellipse(2.0, 1.0)};
    const std::vector<Norm> norms{Norm::euclidean(), Norm::lq(3.0)};
    int count = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const Domain& d = domains[trial % 2];
        const Norm& nrm = norms[(trial / 2) % 2];
        const int n = rng.integer(1, 7);
        const AtomicInstance inst = random_unit_instance(rng, d, n);
        if (inst.plus.size() != static_cast<std::size_t>(n) || inst.minus.size() != static_cast<std::size_t>(n)) continue;
        const TransportPlan plan = solve_kantorovich(d, nrm, inst.plus, inst.minus);
        const TransportPlan brute = brute_force_plan(d, nrm, inst.plus, inst.minus);
        CHECK(std::abs(plan.cost - brute.cost) <= 1e-10 * brute.cost);
        check_marginals(plan);
        ++count;
    }
    CHECK(count > 100);
}

TEST_CASE("strong duality, feasibility and non-crossing on weighted instances") {
    Rng rng(5);
    for (const Domain& d : convex_domains()) {
        for (const Norm& nrm : strict_norms()) {
            for (int rep = 0; rep < 3; ++rep) {
                const AtomicInstance inst = random_weighted_instance(rng, d, rng.integer(5, 60), rng.integer(5, 60));
                const TransportPlan plan = solve_kantorovich(d, nrm, inst.plus, inst.minus);
                check_marginals(plan);
                const DualPotentials pots = dual_potentials(plan);
                CHECK(pots.components == 1);
                CHECK(std::abs(duality_gap(plan, pots)) <= 1e-9 * plan.cost);
                CHECK(max_dual_violation(plan, pots) <= 1e-8);
                CHECK(check_noncrossing(plan).empty());
            }
        }
    }
}

TEST_CASE("Bland fallback and seeded scan order reach the same optimum") {
    Rng rng(21);
    const Domain d = Domain::ellipse(2.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const AtomicInstance inst = random_unit_instance(rng, d, 40);
        const TransportPlan base = solve_kantorovich(d, Norm::euclidean(), inst.plus, inst.minus);
        SolverOptions bland;
        bland.degenerate_limit = 1;
        const TransportPlan b = solve_kantorovich(d, Norm::euclidean(), inst.plus, inst.minus, bland);
        SolverOptions seeded;
        seeded.seed = 77 + rep;
        const TransportPlan s = solve_kantorovich(d, Norm::euclidean(), inst.plus, inst.minus, seeded);
        CHECK(b.cost == doctest::Approx(base.cost).epsilon(1e-12));
        CHECK(s.cost == doctest::Approx(base.cost).epsilon(1e-12));
        check_marginals(b);
        check_marginals(s);
    }
}

TEST_CASE("generic transportation problem") {
    CostMatrix c(2, 3);
    const double vals[2][3] = {{4, 6, 8}, {5, 3, 7}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = vals[i][j];
    const std::vector<double> s{5, 5}, t{3, 3, 4};
    const TransportSolution sol = solve_transportation(s, t, c);
    // x00 = 3, x02 = 2, x11 = 3, x12 = 2 gives 12 + 16 + 9 + 14 = 51
    CHECK(sol.cost == doctest::Approx(51.0));
    double worst = -1e300;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) worst = std::max(worst, sol.phi_source[i] - sol.phi_target[j] - c(i, j));
    CHECK(worst <= 1e-12);
}

TEST_CASE("check_noncrossing examples") {
    const Domain d = Domain::disk(1.0);
    TransportPlan cross;
    cross.sources = {d.point(0.0), d.point(pi / 2)};
    cross.targets = {d.point(pi), d.point(3 * pi / 2)};
    cross.source_mass = cross.target_mass = {1.0, 1.0};
    cross.entries = {{0, 0, 1.0}, {1, 1, 1.0}};
    CHECK(check_noncrossing(cross).size() == 1);

    TransportPlan parallel;
    parallel.sources = {{-0.5, std::sqrt(0.75)}, {0.5, std::sqrt(0.75)}};
    parallel.targets = {{-0.5, -std::sqrt(0.75)}, {0.5, -std::sqrt(0.75)}};
    parallel.source_mass = parallel.target_mass = {1.0, 1.0};
    parallel.entries = {{0, 0, 1.0}, {1, 1, 1.0}};
    CHECK(check_noncrossing(parallel).empty());
}

TEST_CASE("split source atoms raise the multiplicity flag") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    BoundaryMeasure fp({{pi / 2, 2.0, 0.0}}, per);
    BoundaryMeasure fm({{pi - 0.3, 1.0, 0.0}, {0.3, 1.0, 0.0}}, per);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), fp, fm);
    const Displacements disp = displacement_lengths(plan);
    CHECK(disp.multiplicity[0] == 2);
    CHECK(disp.any_split);
}

TEST_CASE("reversed plan swaps roles") {
    const Domain d = Domain::disk(1.0);
    const double per = d.perimeter();
    const TransportPlan plan =
        solve_kantorovich(d, Norm::euclidean(), dirac({0.0, pi / 2}, per), dirac({pi, 3 * pi / 2}, per));
    const TransportPlan r = reversed(plan);
    CHECK(r.cost == plan.cost);
    CHECK(r.sources[0].x == plan.targets[0].x);
    CHECK(r.entries.size() == plan.entries.size());
    CHECK(r.entries[0].i == 0);
    CHECK(r.entries[0].j == 1);
}

TEST_CASE("cost is Lipschitz under target perturbation") {
    Rng rng(8);
    const Domain d = Domain::ellipse(2.0, 1.0);
    const Norm nrm = Norm::lq(3.0);
    for (int rep = 0; rep < 10; ++rep) {
        const AtomicInstance inst = random_weighted_instance(rng, d, 30, 25);
        const double eps = 1e-3;
        std::vector<Atom> moved;
        for (const auto& a : inst.minus.atoms()) moved.push_back({a.s + rng.uniform(-eps, eps), a.mass, 0.0});
        const BoundaryMeasure fm2(moved, d.perimeter());
        const double c1 = solve_kantorovich(d, nrm, inst.plus, inst.minus).cost;
        const double c2 = solve_kantorovich(d, nrm, inst.plus, fm2).cost;
        // arclength moves are at most eps in Euclidean distance
        CHECK(std::abs(c1 - c2) <= eps * inst.minus.total_mass() * nrm.upper_constant() * (1 + 1e-9));
    }
}

TEST_CASE("medium assignment instance stays optimal") {
    Rng rng(99);
    const Domain d = Domain::disk(1.0);
    const AtomicInstance inst = random_unit_instance(rng, d, 300);
    const TransportPlan plan = solve_kantorovich(d, Norm::euclidean(), inst.plus, inst.minus);
    check_marginals(plan);
    const DualPotentials pots = dual_potentials(plan);
    CHECK(std::abs(duality_gap(plan, pots)) <= 1e-9 * plan.cost);
    CHECK(max_dual_violation(plan, pots) <= 1e-8);
    CHECK(check_noncrossing(plan).empty());
}
