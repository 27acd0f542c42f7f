#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "lgt/commands.hpp"
#include "lgt/error.hpp"
#include "lgt/output.hpp"
#include "lgt/problem.hpp"

using namespace lgt;
using nlohmann::json;
using std::numbers::pi;

namespace {

json pair_doc() {
    return json::parse(R"({
        "domain": {"kind": "disk", "radius": 1.0},
        "f_plus": [[0.0, 1.0]],
        "f_minus": [[3.141592653589793, 1.0]],
        "grid": {"nx": 64, "ny": 64}
    })");
}

json cos_doc(int samples) {
    json rows = json::array();
    for (int k = 0; k < samples; ++k) {
        const double s = 2 * pi * k / samples;
        rows.push_back({s, std::cos(s)});
    }
    return {{"domain", {{"kind", "disk"}, {"radius", 1.0}}}, {"g", {{"samples", rows}}}, {"grid", {{"nx", 128}, {"ny", 128}}}};
}

}  // namespace

TEST_CASE("problem files from problems/ parse") {
    for (const char* name : {"single_pair", "two_by_two", "cos_theta", "step", "radial_mixed"}) {
        CAPTURE(name);
        const ProblemFile p = load_problem(std::string(LGT_PROBLEM_DIR) + "/" + name + ".json");
        const SignedMeasure m = p.measures();
        CHECK(m.plus.total_mass() == doctest::Approx(m.minus.total_mass()).epsilon(1e-9));
        CHECK(m.plus.total_mass() > 0.0);
    }
}

TEST_CASE("schema violations are rejected") {
    json doc = pair_doc();
    doc["colour"] = "red";
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);

    doc = pair_doc();
    doc["g"] = {{"samples", json::array({{0.0, 0.0}, {1.0, 1.0}})}};
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);

    doc = pair_doc();
    doc.erase("f_minus");
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);

    doc = pair_doc();
    doc["domain"] = {{"kind", "square"}};
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);

    doc = pair_doc();
    doc["norm"] = {{"kind", "lq"}, {"q", 1.0}};
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);

    doc = pair_doc();
    doc["f_plus"] = "oops";
    CHECK_THROWS_AS(parse_problem(doc), SchemaError);
}

TEST_CASE("imbalanced atoms are infeasible") {
    json doc = pair_doc();
    doc["f_minus"] = json::array({{pi, 2.0}});
    const ProblemFile p = parse_problem(doc);
    CHECK_THROWS_AS(run_solve(p, {}), InfeasibleError);
}

TEST_CASE("resolved problem round-trips") {
    const ProblemFile p = parse_problem(cos_doc(64));
    const json r = p.resolved();
    CHECK(r.at("norm").at("kind") == "euclidean");
    CHECK(r.at("quadrature") == 1);
    const ProblemFile q = parse_problem(r);
    CHECK(q.resolved() == r);
}

TEST_CASE("grid csv round-trips exactly") {
    GridField f;
    f.spec = GridSpec{{-1.25, -0.5}, 0.1, 3, 2};
    f.values = {0.0, 1.0 / 3.0, -2.5e-17, 1e300, pi, -0.0};
    const GridField g = parse_grid_csv(grid_csv(f));
    CHECK(g.spec.nx == 3);
    CHECK(g.spec.ny == 2);
    CHECK(g.spec.cell == f.spec.cell);
    CHECK(g.spec.origin.x == f.spec.origin.x);
    for (std::size_t k = 0; k < f.values.size(); ++k) CHECK(g.values[k] == f.values[k]);
}

TEST_CASE("pgm header and size") {
    GridField f;
    f.spec = GridSpec{{0.0, 0.0}, 1.0, 5, 4};
    f.values.assign(20, 1.0);
    const std::string pgm = grid_pgm(f);
    CHECK(pgm.rfind("P5\n5 4\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n5 4\n255\n").size() + 20);
}

TEST_CASE("solve command on a single pair") {
    const CommandResult r = run_solve(parse_problem(pair_doc()), {});
    CHECK(r.exit_code == kOk);
    CHECK(r.report.at("cost").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r.report.at("gap").get<double>()) <= 1e-9);
    const json plan = json::parse(r.files.at("plan.json"));
    CHECK(plan.at("entries").size() == 1);
    CHECK(plan.size() == 3);
}

TEST_CASE("lsg command on cos data") {
    CommandOptions opts;
    opts.svg = true;
    const CommandResult r = run_lsg(parse_problem(cos_doc(800)), opts);
    CHECK(r.exit_code == kOk);
    CHECK(r.report.at("cost").get<double>() == doctest::Approx(pi).epsilon(1e-3));
    CHECK(r.report.at("trace_error").get<double>() < 0.05);
    CHECK(r.files.count("u.csv") == 1);
    CHECK(r.files.count("u.svg") == 1);
}

TEST_CASE("bound and cex flag infinities with exit code 4") {
    CommandOptions opts;
    opts.tau = 1.0;
    opts.p = 2.0;
    CHECK(run_bound(parse_problem(cos_doc(200)), opts).exit_code == kDivergent);
    opts.tau = 0.5;
    CHECK(run_bound(parse_problem(cos_doc(200)), opts).exit_code == kOk);

    CommandOptions c;
    c.pairs = 2;
    c.p = 3.0;
    const CommandResult r = run_cex(c);
    CHECK(r.exit_code == kDivergent);
    CHECK(dump_json(r.report).find("\"inf\"") != std::string::npos);
    c.p = 2.0;
    CHECK(run_cex(c).exit_code == kOk);
}

TEST_CASE("commands are deterministic") {
    const ProblemFile p = parse_problem(cos_doc(300));
    CommandOptions opts;
    opts.pgm = true;
    const CommandResult a = run_density(p, opts);
    const CommandResult b = run_density(p, opts);
    CHECK(dump_json(a.report) == dump_json(b.report));
    CHECK(a.files == b.files);
}
