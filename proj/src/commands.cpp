#include "lgt/commands.hpp"

#include <cmath>
#include <cstdio>

#include "lgt/cex.hpp"
#include "lgt/density.hpp"
#include "lgt/error.hpp"
#include "lgt/leastgrad.hpp"
#include "lgt/output.hpp"
#include "lgt/transport.hpp"
#include "lgt/version.hpp"

namespace lgt {

using nlohmann::json;

namespace {

std::uint64_t effective_seed(const ProblemFile& pf, const CommandOptions& o) {
    return o.seed ? *o.seed : pf.seed;
}

json header(const std::string& command, const ProblemFile& pf, const CommandOptions& o) {
    json config = pf.resolved();
    config["seed"] = effective_seed(pf, o);
    if (o.grid) config["grid"] = {{"n", *o.grid}};
    return {{"command", command}, {"version", kVersion}, {"config", config}};
}

GridSpec grid_of(const ProblemFile& pf, const CommandOptions& o) {
    return o.grid ? grid_for(pf.domain, *o.grid) : grid_for(pf.domain, pf.nx, pf.ny);
}

json grid_json(const GridSpec& g) {
    return {{"origin", {g.origin.x, g.origin.y}}, {"cell", g.cell}, {"nx", g.nx}, {"ny", g.ny}};
}

struct Solved {
    SignedMeasure f;
    TransportPlan plan;
};

Solved solve(const ProblemFile& pf, const CommandOptions& o) {
    Solved s;
    s.f = pf.measures();
    if (s.f.plus.empty() && s.f.minus.empty()) {
        s.plan.norm = pf.norm;
        return s;
    }
    SolverOptions so;
    so.seed = effective_seed(pf, o);
    s.plan = solve_kantorovich(pf.domain, pf.norm, s.f.plus, s.f.minus, so);
    return s;
}

std::string key_of(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

void check_tau(double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw SchemaError("--tau must lie in (0, 1]");
}

}  // namespace

CommandResult run_solve(const ProblemFile& pf, const CommandOptions& o) {
    const Solved s = solve(pf, o);
    const TransportPlan& plan = s.plan;
    const DualPotentials pots = dual_potentials(plan);
    const double gap = plan.entries.empty() ? 0.0 : duality_gap(plan, pots);
    const long pairs = static_cast<long>(plan.sources.size()) * static_cast<long>(plan.targets.size());
    const double violation =
        plan.entries.empty() ? 0.0 : max_dual_violation(plan, pots, pairs > 4'000'000 ? 100000 : 0, 1);

    json entries = json::array();
    for (const auto& e : plan.entries) entries.push_back({e.i, e.j, e.mass});
    CommandResult r;
    r.files["plan.json"] = dump_json({{"entries", entries}, {"cost", plan.cost}, {"gap", gap}});

    const Displacements disp = displacement_lengths(plan);
    r.report = header("solve", pf, o);
    r.report["cost"] = plan.cost;
    r.report["gap"] = gap;
    r.report["max_dual_violation"] = violation;
    r.report["sources"] = plan.sources.size();
    r.report["targets"] = plan.targets.size();
    r.report["support"] = plan.entries.size();
    r.report["crossings"] = check_noncrossing(plan).size();
    r.report["split_sources"] = disp.any_split;
    r.report["pivots"] = plan.stats.pivots;
    r.report["components"] = pots.components;
    return r;
}

CommandResult run_density(const ProblemFile& pf, const CommandOptions& o) {
    check_tau(o.tau);
    const Solved s = solve(pf, o);
    const GridSpec spec = grid_of(pf, o);
    const GridField sigma = deposit_partial_density(s.plan, o.tau, spec);
    CommandResult r;
    r.files["sigma.csv"] = grid_csv(sigma);
    if (o.pgm) r.files["sigma.pgm"] = grid_pgm(sigma);
    r.report = header("density", pf, o);
    r.report["tau"] = o.tau;
    r.report["grid"] = grid_json(spec);
    r.report["integral"] = sigma.integral();
    r.report["cost"] = s.plan.cost;
    return r;
}

CommandResult run_lp_norm(const ProblemFile& pf, const CommandOptions& o) {
    check_tau(o.tau);
    if (!(o.p >= 1.0)) throw SchemaError("--p must be at least 1");
    const Solved s = solve(pf, o);
    const GridSpec spec = grid_of(pf, o);
    const GridField sigma = deposit_partial_density(s.plan, o.tau, spec);
    CommandResult r;
    r.report = header("lp-norm", pf, o);
    r.report["p"] = number_or_inf(o.p);
    r.report["tau"] = o.tau;
    r.report["grid"] = grid_json(spec);
    r.report["norm"] = lp_norm(sigma, o.p);
    return r;
}

CommandResult run_bound(const ProblemFile& pf, const CommandOptions& o) {
    check_tau(o.tau);
    const Solved s = solve(pf, o);
    const BoundFactors f = lp_bound_factors(s.plan, s.f.plus, o.p, o.tau);
    const GridSpec spec = grid_of(pf, o);
    const GridField sigma = deposit_partial_density(s.plan, o.tau, spec);
    const double lhs = std::pow(lp_norm(sigma, o.p), o.p);
    const bool infinite = f.time_integral.infinite || f.data_integral.infinite;
    CommandResult r;
    r.report = header("bound", pf, o);
    r.report["p"] = o.p;
    r.report["tau"] = o.tau;
    r.report["grid"] = grid_json(spec);
    r.report["time_integral"] = number_or_inf(f.time_integral.value);
    r.report["data_integral"] = number_or_inf(f.data_integral.value);
    r.report["lp_norm_p"] = lhs;
    r.report["ratio"] = infinite ? json(0.0) : json(lhs / (f.time_integral.value * f.data_integral.value));
    r.report["divergent"] = infinite;
    r.exit_code = infinite ? kDivergent : kOk;
    return r;
}

CommandResult run_lsg(const ProblemFile& pf, const CommandOptions& o) {
    if (!pf.g) throw SchemaError("lsg needs a problem with boundary datum 'g'");
    const Solved s = solve(pf, o);
    const GridSpec spec = grid_of(pf, o);
    const SegmentFlow flow = flow_from_plan(s.plan);
    const GridField u = reconstruct_u(flow, *pf.g, pf.domain, spec);
    const GridField sigma = deposit_partial_density(s.plan, 1.0, spec);
    const Norm phi = pf.norm.rotated();

    json norms = json::object();
    for (double p : {1.0, 1.5, 2.0, o.p}) norms[key_of(p)] = lp_norm(sigma, p);
    Rng rng(effective_seed(pf, o));

    CommandResult r;
    r.files["u.csv"] = grid_csv(u);
    if (o.svg) r.files["u.svg"] = contour_svg(u, pf.domain, flow);
    r.report = header("lsg", pf, o);
    r.report["grid"] = grid_json(spec);
    r.report["cost"] = s.plan.cost;
    r.report["tv"] = total_variation(u, phi, pf.domain);
    r.report["trace_error"] = trace_error(u, *pf.g, pf.domain);
    r.report["lp_norms"] = norms;
    r.report["holder_quotient_half"] = holder_quotient(u, pf.domain, 0.5, 20000, rng);
    return r;
}

CommandResult run_cex(const CommandOptions& o) {
    if (o.pairs < 1) throw SchemaError("--pairs must be positive");
    if (o.mode != "exact" && o.mode != "grid") throw SchemaError("--mode must be 'exact' or 'grid'");
    const Domain disk = Domain::disk(1.0);
    const ArcSystem arcs = build_arcs(disk, o.pairs);
    CexOptions co;
    co.p = o.p;
    co.mode = o.mode == "exact" ? CexMode::exact : CexMode::grid;
    co.grid = o.grid.value_or(512);
    co.atoms = o.atoms;
    const CexReport rep = run_counterexample(arcs, co);

    json per = json::array();
    for (const auto& pr : rep.per_pair) {
        per.push_back({{"n", pr.n}, {"eps", pr.eps}, {"value", number_or_inf(pr.value.value)},
                       {"reference", pr.reference}});
    }
    CommandResult r;
    json config = {{"pairs", o.pairs}, {"p", o.p}, {"mode", o.mode}, {"domain", domain_to_json(disk)}};
    if (co.mode == CexMode::grid) {
        config["grid"] = co.grid;
        config["atoms"] = co.atoms;
    }
    r.report = {{"command", "cex"}, {"version", kVersion}, {"config", config}};
    r.report["scale"] = arcs.scale;
    r.report["per_pair"] = per;
    r.report["partial_sum"] = number_or_inf(rep.partial_sum.value);
    r.report["reference_sum"] = rep.reference_sum;
    r.report["ratio"] = number_or_inf(rep.ratio);
    r.report["divergent"] = rep.divergent;
    if (rep.divergent) {
        r.report["warning"] = co.mode == CexMode::exact
                                  ? "p >= 3: every pair integral diverges at the junction"
                                  : "p >= 3: grid values are finite only because of the resolution";
    }
    if (o.svg) {
        std::vector<TransportPlan> plans;
        for (int n = 1; n <= arcs.pairs; ++n) plans.push_back(solve_pair(arcs, n, 12).plan);
        r.files["cex.svg"] = arcs_svg(arcs, plans);
    }
    r.exit_code = rep.divergent ? kDivergent : kOk;
    return r;
}

}  // namespace lgt
