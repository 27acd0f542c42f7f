#include "lgt/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgt/error.hpp"

namespace lgt {

namespace {

GridSpec centered_grid(const Box& box, double cell, int nx, int ny) {
    GridSpec spec;
    spec.cell = cell;
    spec.nx = nx;
    spec.ny = ny;
    const Vec2 mid = 0.5 * (box.lo + box.hi);
    spec.origin = {mid.x - 0.5 * nx * cell, mid.y - 0.5 * ny * cell};
    return spec;
}

int cells_to_cover(double extent, double cell) {
    return std::max(1, static_cast<int>(std::ceil(extent / cell - 1e-9)));
}

}  // namespace

GridSpec grid_for(const Domain& domain, int n) {
    if (n < 1) throw SchemaError("grid resolution must be positive");
    const Box box = domain.bounding_box();
    const double w = box.hi.x - box.lo.x, h = box.hi.y - box.lo.y;
    const double cell = std::max(w, h) / n;
    return centered_grid(box, cell, cells_to_cover(w, cell), cells_to_cover(h, cell));
}

GridSpec grid_for(const Domain& domain, int nx, int ny) {
    if (nx < 1 || ny < 1) throw SchemaError("grid resolution must be positive");
    const Box box = domain.bounding_box();
    const double cell = std::max((box.hi.x - box.lo.x) / nx, (box.hi.y - box.lo.y) / ny);
    return centered_grid(box, cell, nx, ny);
}

double GridField::integral() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * spec.cell * spec.cell;
}

double GridField::sample(Vec2 p) const {
    const double fx = (p.x - spec.origin.x) / spec.cell - 0.5;
    const double fy = (p.y - spec.origin.y) / spec.cell - 0.5;
    const double cx = std::clamp(fx, 0.0, spec.nx - 1.0);
    const double cy = std::clamp(fy, 0.0, spec.ny - 1.0);
    const int x0 = std::min(static_cast<int>(cx), std::max(spec.nx - 2, 0));
    const int y0 = std::min(static_cast<int>(cy), std::max(spec.ny - 2, 0));
    const int x1 = std::min(x0 + 1, spec.nx - 1), y1 = std::min(y0 + 1, spec.ny - 1);
    const double tx = cx - x0, ty = cy - y0;
    return (1 - ty) * ((1 - tx) * at(x0, y0) + tx * at(x1, y0)) +
           ty * ((1 - tx) * at(x0, y1) + tx * at(x1, y1));
}

std::vector<InterpolatedAtom> interpolate_ft(const TransportPlan& plan, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw SchemaError("interpolation time must lie in [0, 1]");
    std::vector<InterpolatedAtom> out;
    out.reserve(plan.entries.size());
    for (const auto& e : plan.entries) {
        const Vec2 x = plan.sources[e.i], y = plan.targets[e.j];
        out.push_back({lerp(x, y, t), e.mass * plan.entry_cost(e)});
    }
    return out;
}

void deposit_segment(const GridSpec& spec, Vec2 a, Vec2 b,
                     const std::function<void(std::size_t, double)>& visit) {
    const double len = length(b - a);
    if (len == 0.0) return;
    // grid coordinates
    const double ux0 = (a.x - spec.origin.x) / spec.cell, uy0 = (a.y - spec.origin.y) / spec.cell;
    const double ux1 = (b.x - spec.origin.x) / spec.cell, uy1 = (b.y - spec.origin.y) / spec.cell;
    const double dx = ux1 - ux0, dy = uy1 - uy0;

    thread_local std::vector<double> tx, ty, ts;
    auto crossings = [](double u0, double u1, double du, std::vector<double>& out) {
        out.clear();
        if (du > 0.0) {
            for (double k = std::floor(u0) + 1.0; k < u1; k += 1.0) out.push_back((k - u0) / du);
        } else if (du < 0.0) {
            for (double k = std::ceil(u0) - 1.0; k > u1; k -= 1.0) out.push_back((k - u0) / du);
        }
    };
    crossings(ux0, ux1, dx, tx);
    crossings(uy0, uy1, dy, ty);
    ts.resize(tx.size() + ty.size() + 2);
    ts[0] = 0.0;
    std::merge(tx.begin(), tx.end(), ty.begin(), ty.end(), ts.begin() + 1);
    ts.back() = 1.0;

    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double t0 = ts[k], t1 = ts[k + 1];
        if (!(t1 > t0)) continue;
        const double tm = 0.5 * (t0 + t1);
        int ix = static_cast<int>(std::floor(ux0 + tm * dx));
        int iy = static_cast<int>(std::floor(uy0 + tm * dy));
        ix = std::clamp(ix, 0, spec.nx - 1);
        iy = std::clamp(iy, 0, spec.ny - 1);
        visit(spec.index(ix, iy), (t1 - t0) * len);
    }
}

GridField deposit_partial_density(const TransportPlan& plan, double tau, const GridSpec& spec) {
    if (!(tau > 0.0 && tau <= 1.0)) throw SchemaError("tau must lie in (0, 1]");
    GridField field(spec);
    const double inv_area = 1.0 / (spec.cell * spec.cell);
    double* v = field.values.data();
    for (const auto& e : plan.entries) {
        const Vec2 x = plan.sources[e.i], y = plan.targets[e.j];
        const double euclid = length(y - x);
        if (euclid == 0.0) continue;
        const double linear = e.mass * plan.entry_cost(e) / euclid * inv_area;
        const Vec2 end = tau == 1.0 ? y : lerp(x, y, tau);
        deposit_segment(spec, x, end, [&](std::size_t idx, double l) { v[idx] += linear * l; });
    }
    return field;
}

double lp_norm(const GridField& field, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : field.values) m = std::max(m, std::abs(x));
        return m;
    }
    if (!(p >= 1.0)) throw SchemaError("lp_norm needs p >= 1");
    double sum = 0.0;
    for (double x : field.values) {
        if (x != 0.0) sum += std::pow(std::abs(x), p);
    }
    return std::pow(sum * field.spec.cell * field.spec.cell, 1.0 / p);
}

BoundFactors lp_bound_factors(const TransportPlan& plan, const BoundaryMeasure& f_plus, double p,
                             double tau) {
    if (!(p > 1.0)) throw SchemaError("the L^p bound needs p > 1");
    if (!(tau > 0.0 && tau <= 1.0)) throw SchemaError("tau must lie in (0, 1]");
    if (f_plus.size() != plan.sources.size()) {
        throw SchemaError("f_plus does not match the plan's source atoms");
    }
    BoundFactors out;
    if (tau == 1.0 && p >= 2.0) {
        out.time_integral.infinite = true;
        out.time_integral.value = std::numeric_limits<double>::infinity();
    } else if (p == 2.0) {
        out.time_integral.value = -std::log1p(-tau);
    } else {
        out.time_integral.value = (1.0 - std::pow(1.0 - tau, 2.0 - p)) / (2.0 - p);
    }

    const Displacements disp = displacement_lengths(plan);
    double sum = 0.0;
    for (std::size_t i = 0; i < f_plus.size(); ++i) {
        const Atom& a = f_plus.atoms()[i];
        if (a.width <= 0.0) {
            out.data_integral.infinite = true;
            out.data_integral.value = std::numeric_limits<double>::infinity();
            return out;
        }
        const double dens = a.mass / a.width;
        sum += std::pow(dens, p) * a.width * std::pow(disp.length[i], 2.0 - p);
    }
    out.data_integral.value = sum;
    return out;
}

double density_mass(const TransportPlan& plan) {
    double sum = 0.0;
    for (const auto& e : plan.entries) sum += e.mass * plan.entry_cost(e);
    return sum;
}

}  // namespace lgt
