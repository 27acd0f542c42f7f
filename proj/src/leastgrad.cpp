#include "lgt/leastgrad.hpp"

#include <algorithm>
#include <cmath>

#include "lgt/error.hpp"

namespace lgt {

SegmentFlow flow_from_plan(const TransportPlan& plan) {
    SegmentFlow flow;
    flow.segments.reserve(plan.entries.size());
    for (const auto& e : plan.entries) {
        flow.segments.push_back({plan.sources[e.i], plan.targets[e.j], e.mass});
    }
    return flow;
}

namespace {

double clear_anchor(const SegmentFlow& flow, const Domain& domain, double s0) {
    const double diam = domain.diameter();
    const double step = 1e-9 * diam;
    for (int k = 0; k < 1000; ++k) {
        const double s = domain.wrap(s0 + k * step);
        const Vec2 A = domain.point(s);
        bool clear = true;
        for (const auto& seg : flow.segments) {
            if (length(seg.a - A) < 1e-12 * diam || length(seg.b - A) < 1e-12 * diam) {
                clear = false;
                break;
            }
        }
        if (clear) return s;
    }
    throw std::runtime_error("could not place the reconstruction anchor off the flow endpoints");
}

}  // namespace

GridField reconstruct_u(const SegmentFlow& flow, const BoundaryDatum& g, const Domain& domain,
                        const GridSpec& spec, const ReconstructOptions& options) {
    const double s_anchor = clear_anchor(flow, domain, options.anchor_s);
    const Vec2 A = domain.point(s_anchor);
    const double base = g.value(s_anchor);

    struct Line {
        Vec2 a, d;
        double delta;  // signed jump picked up when crossing
        double k;      // sign of (x - x*) on the far side, see below
    };
    std::vector<Line> lines;
    lines.reserve(flow.segments.size());
    for (const auto& seg : flow.segments) {
        const Vec2 d = seg.b - seg.a;
        const double sa = cross(d, A - seg.a);
        if (sa == 0.0 || seg.mass == 0.0) continue;
        lines.push_back({seg.a, d, sa > 0.0 ? seg.mass : -seg.mass, sa});
    }

    GridField u(spec, base);
    std::vector<double> diff(spec.nx + 1);
    for (int iy = 0; iy < spec.ny; ++iy) {
        std::fill(diff.begin(), diff.end(), 0.0);
        const double y = spec.origin.y + (iy + 0.5) * spec.cell;
        double whole = 0.0;
        for (const Line& ln : lines) {
            // side(x) = d.x (y - a.y) - d.y (x - a.x); the far side is where
            // side(x) * sA < 0.
            if (ln.d.y == 0.0) {
                const double side = ln.d.x * (y - ln.a.y);
                if (side * ln.k < 0.0) whole += ln.delta;
                continue;
            }
            const double xstar = ln.a.x + ln.d.x * (y - ln.a.y) / ln.d.y;
            const double v = (xstar - spec.origin.x) / spec.cell - 0.5;
            // side(x) * sA = -d.y * sA * (x - x*)
            if (-ln.d.y * ln.k < 0.0) {
                // far side is x > x*: cells i > v
                const double first = std::floor(v) + 1.0;
                const int i0 = static_cast<int>(std::clamp(first, 0.0, static_cast<double>(spec.nx)));
                diff[i0] += ln.delta;
                diff[spec.nx] -= ln.delta;
            } else {
                // far side is x < x*: cells i < v
                const double last = std::ceil(v) - 1.0;
                const int i1 = static_cast<int>(std::clamp(last + 1.0, 0.0, static_cast<double>(spec.nx)));
                diff[0] += ln.delta;
                diff[i1] -= ln.delta;
            }
        }
        double run = 0.0;
        for (int ix = 0; ix < spec.nx; ++ix) {
            run += diff[ix];
            u.at(ix, iy) = base + whole + run;
        }
    }
    return u;
}

GridField gradient_magnitude(const GridField& u, const Norm& anisotropy, const Domain& domain) {
    const GridSpec& s = u.spec;
    GridField out(s);
    for (int iy = 0; iy < s.ny; ++iy) {
        for (int ix = 0; ix < s.nx; ++ix) {
            if (!domain.contains(s.center(ix, iy))) continue;
            const double here = u.at(ix, iy);
            const double gx = ix + 1 < s.nx ? (u.at(ix + 1, iy) - here) / s.cell : 0.0;
            const double gy = iy + 1 < s.ny ? (u.at(ix, iy + 1) - here) / s.cell : 0.0;
            out.at(ix, iy) = anisotropy({gx, gy});
        }
    }
    return out;
}

double total_variation(const GridField& u, const Norm& anisotropy, const Domain& domain) {
    return gradient_magnitude(u, anisotropy, domain).integral();
}

double trace_error(const GridField& u, const BoundaryDatum& g, const Domain& domain, int samples) {
    if (samples < 1) throw SchemaError("trace_error needs at least one sample");
    const double h = u.spec.cell;
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double s = domain.perimeter() * k / samples;
        const Vec2 p = domain.point(s) + 2.0 * h * domain.inward_normal(s);
        worst = std::max(worst, std::abs(u.sample(p) - g.value(s)));
    }
    return worst;
}

double holder_quotient(const GridField& u, const Domain& domain, double alpha, int pairs, Rng& rng) {
    const GridSpec& s = u.spec;
    double worst = 0.0;
    int done = 0;
    for (int attempt = 0; done < pairs && attempt < 50 * pairs; ++attempt) {
        const int x0 = rng.integer(0, s.nx - 1), y0 = rng.integer(0, s.ny - 1);
        const int x1 = rng.integer(0, s.nx - 1), y1 = rng.integer(0, s.ny - 1);
        const Vec2 p = s.center(x0, y0), q = s.center(x1, y1);
        const double dist = length(p - q);
        if (dist < 2.0 * s.cell || !domain.contains(p) || !domain.contains(q)) continue;
        worst = std::max(worst, std::abs(u.at(x0, y0) - u.at(x1, y1)) / std::pow(dist, alpha));
        ++done;
    }
    return worst;
}

}  // namespace lgt
