#include "lgt/cex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lgt/error.hpp"
#include "lgt/quadrature.hpp"

namespace lgt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double default_term(int n) {
    const double l = std::log1p(static_cast<double>(n));
    return 1.0 / (n * l * l);
}

void require_disk(const Domain& d) {
    if (d.kind() != DomainKind::disk) throw SchemaError("the arc construction needs a disk domain");
}

void check_pair(const ArcSystem& arcs, int n) {
    if (n < 1 || n > arcs.pairs) {
        std::ostringstream os;
        os << "pair index " << n << " outside 1.." << arcs.pairs;
        throw SchemaError(os.str());
    }
}

ArcSystem lay_out(const Domain& disk, std::vector<double> eps, double scale, bool standard) {
    ArcSystem sys;
    sys.domain = disk;
    sys.pairs = static_cast<int>(eps.size());
    sys.scale = scale;
    sys.default_sequence = standard;
    double pos = 0.0;
    for (int n = 1; n <= sys.pairs; ++n) {
        const double e = eps[n - 1];
        // odd pairs run +,-; even pairs run -,+
        const bool first_plus = (n % 2) == 1;
        sys.arcs.push_back({n, first_plus, pos, e});
        sys.arcs.push_back({n, !first_plus, pos + e, e});
        pos += 2.0 * e;
    }
    sys.eps = std::move(eps);
    return sys;
}

}  // namespace

const Arc& ArcSystem::plus_arc(int n) const {
    const Arc& a = arcs[2 * (n - 1)];
    return a.plus ? a : arcs[2 * (n - 1) + 1];
}

const Arc& ArcSystem::minus_arc(int n) const {
    const Arc& a = arcs[2 * (n - 1)];
    return a.plus ? arcs[2 * (n - 1) + 1] : a;
}

double ArcSystem::junction(int n) const { return arcs[2 * (n - 1) + 1].start; }

double default_sequence_sum() {
    static const double total = [] {
        constexpr int K = 100000;
        double sum = 0.0;
        // smallest terms first
        for (int n = K; n >= 1; --n) sum += default_term(n);
        // int_{K + 1/2}^inf dx / (x log^2 x) is 1 / log(K + 1/2); the shift
        // from log(1 + x) is below 1e-10 at this K
        return sum + 1.0 / std::log(K + 1.5);
    }();
    return total;
}

ArcSystem build_arcs(const Domain& disk, int pairs) {
    require_disk(disk);
    if (pairs < 1) throw SchemaError("the arc construction needs at least one pair");
    const double scale = 0.5 * disk.perimeter() / (2.0 * default_sequence_sum());
    std::vector<double> eps(pairs);
    for (int n = 1; n <= pairs; ++n) eps[n - 1] = scale * default_term(n);
    return lay_out(disk, std::move(eps), scale, true);
}

ArcSystem build_arcs(const Domain& disk, std::vector<double> eps) {
    require_disk(disk);
    if (eps.empty()) throw SchemaError("the arc construction needs at least one pair");
    double total = 0.0;
    for (double e : eps) {
        if (!(e > 0.0) || !std::isfinite(e)) throw SchemaError("arc lengths must be positive");
        total += 2.0 * e;
    }
    if (total > disk.perimeter()) {
        std::ostringstream os;
        os << "arcs need length " << total << " but the perimeter is " << disk.perimeter();
        throw SchemaError(os.str());
    }
    return lay_out(disk, std::move(eps), 1.0, false);
}

Flagged exact_pair_lp(const ArcSystem& arcs, int n, double p, double rel_tol) {
    check_pair(arcs, n);
    if (!(p >= 1.0)) throw SchemaError("exact_pair_lp needs p >= 1");
    if (p >= 3.0) return {kInf, true};
    const double R = arcs.domain.radius();
    const double eps = arcs.eps[n - 1];
    if (eps > 0.5 * std::numbers::pi * R) {
        throw SchemaError("arc longer than a quarter circle: the graph chart breaks down");
    }
    // Chart centered at the junction: the circle is the graph of
    // alpha(s) = sqrt(R^2 - s^2), the pair spans s in [-s_max, s_max], and
    // the reflection s -> -s is the optimal map. With y = ((1-2t)s, alpha(s)):
    //   J = 2 s |alpha'(s)|,  sigma = 2 s sqrt(1 + alpha'^2) / J.
    // Substituting s = s_max u^m with m >= 1/(3-p) removes the s^(2-p)
    // endpoint singularity.
    const double s_max = R * std::sin(eps / R);
    const double m = std::max(1.0, std::ceil(1.0 / (3.0 - p)));
    auto integrand = [&](double /*t*/, double u) {
        if (u <= 0.0) return 0.0;
        const double s = s_max * std::pow(u, m);
        const double alpha = std::sqrt(R * R - s * s);
        const double dalpha = s / alpha;  // |alpha'|
        const double J = 2.0 * s * dalpha;
        const double sigma = 2.0 * s * std::sqrt(1.0 + dalpha * dalpha) / J;
        const double ds_du = s_max * m * std::pow(u, m - 1.0);
        return std::pow(sigma, p) * J * ds_du;
    };
    CubatureOptions opts;
    opts.rel_tol = rel_tol;
    opts.max_regions = 200000;
    const CubatureResult r = integrate_2d(integrand, 0.0, 1.0, 0.0, 1.0, opts);
    if (!r.converged) throw std::runtime_error("pair integral did not reach its tolerance");
    return {r.value, false};
}

PairProblem solve_pair(const ArcSystem& arcs, int n, int atoms) {
    check_pair(arcs, n);
    if (atoms < 1) throw SchemaError("need at least one atom per arc");
    const double per = arcs.domain.perimeter();
    auto one = [](double) { return 1.0; };
    const Arc& ap = arcs.plus_arc(n);
    const Arc& am = arcs.minus_arc(n);
    PairProblem pp;
    pp.plus = quadrature_atoms(one, ap.start, ap.start + ap.length, atoms, per);
    pp.minus = quadrature_atoms(one, am.start, am.start + am.length, atoms, per);
    pp.plan = solve_kantorovich(arcs.domain, Norm::euclidean(), pp.plus, pp.minus);
    return pp;
}

double reflection_defect(const ArcSystem& arcs, int n, const TransportPlan& plan) {
    const double j = arcs.junction(n);
    double worst = 0.0;
    for (const auto& e : plan.entries) {
        const double a = plan.source_s[e.i] - j, b = plan.target_s[e.j] - j;
        worst = std::max(worst, std::abs(a + b));
    }
    return worst;
}

CexReport run_counterexample(const ArcSystem& arcs, const CexOptions& options) {
    if (!(options.p >= 1.0)) throw SchemaError("p must be at least 1");
    CexReport report;
    report.divergent = options.p >= 3.0;

    GridSpec spec;
    std::vector<double> scratch;
    std::vector<std::size_t> touched;
    if (options.mode == CexMode::grid) {
        spec = grid_for(arcs.domain, options.grid);
        scratch.assign(spec.size(), 0.0);
    }

    double sum = 0.0;
    bool infinite = false;
    for (int n = 1; n <= arcs.pairs; ++n) {
        PairReport pr;
        pr.n = n;
        pr.eps = arcs.eps[n - 1];
        pr.reference = std::pow(pr.eps, 3.0 - options.p);
        if (options.mode == CexMode::exact) {
            pr.value = exact_pair_lp(arcs, n, options.p, options.rel_tol);
        } else {
            const PairProblem pp = solve_pair(arcs, n, options.atoms);
            const double inv_area = 1.0 / (spec.cell * spec.cell);
            touched.clear();
            for (const auto& e : pp.plan.entries) {
                const Vec2 x = pp.plan.sources[e.i], y = pp.plan.targets[e.j];
                const double lin = e.mass * inv_area;  // euclidean cost: ||x-y|| / |x-y| = 1
                deposit_segment(spec, x, y, [&](std::size_t idx, double l) {
                    if (scratch[idx] == 0.0) touched.push_back(idx);
                    scratch[idx] += lin * l;
                });
            }
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            double v = 0.0;
            for (std::size_t idx : touched) {
                v += std::pow(scratch[idx], options.p);
                scratch[idx] = 0.0;
            }
            pr.value = {v * spec.cell * spec.cell, false};
        }
        if (pr.value.infinite) {
            infinite = true;
        } else {
            sum += pr.value.value;
        }
        report.reference_sum += pr.reference;
        report.per_pair.push_back(pr);
    }
    report.partial_sum = infinite ? Flagged{kInf, true} : Flagged{sum, false};
    report.ratio = infinite ? kInf : sum / report.reference_sum;
    return report;
}

}  // namespace lgt
