#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lgt/geom.hpp"
#include "lgt/measures.hpp"
#include "lgt/transport.hpp"

namespace lgt {

/// Uniform square-cell grid; cell (ix, iy) covers
/// [origin.x + ix*cell, origin.x + (ix+1)*cell) x [origin.y + iy*cell, ...).
struct GridSpec {
    Vec2 origin;
    double cell = 1.0;
    int nx = 1;
    int ny = 1;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
    Vec2 center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * cell, origin.y + (iy + 0.5) * cell};
    }
};

/// Grid over the bounding box of the domain with `n` cells along its longer
/// side, centered on the box.
GridSpec grid_for(const Domain& domain, int n = 512);
/// Explicit resolution nx x ny; the cell is sized so the grid covers the box.
GridSpec grid_for(const Domain& domain, int nx, int ny);

/// Scalar field on a GridSpec, values row-major (values[iy * nx + ix]).
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0) : spec(s), values(s.size(), fill) {}

    double& at(int ix, int iy) { return values[spec.index(ix, iy)]; }
    double at(int ix, int iy) const { return values[spec.index(ix, iy)]; }
    /// Sum of values * cell^2.
    double integral() const;
    /// Bilinear interpolation between cell centers, clamped at the border.
    double sample(Vec2 p) const;
};

struct InterpolatedAtom {
    Vec2 point;
    double mass = 0.0;
};

/// f_t: one atom per plan entry at (1-t)x + ty with mass ||x - y|| * mass.
std::vector<InterpolatedAtom> interpolate_ft(const TransportPlan& plan, double t);

/// Walks the cells crossed by segment [a, b] and reports each crossed cell
/// index together with the exact length of the segment inside it. Portions
/// outside the grid are attributed to the nearest border cell.
void deposit_segment(const GridSpec& spec, Vec2 a, Vec2 b,
                     const std::function<void(std::size_t, double)>& visit);

/// sigma^(tau): each entry's sub-segment from x to (1-tau)x + tau y carries
/// linear density mass * ||x - y|| / |x - y|. 0 < tau <= 1.
GridField deposit_partial_density(const TransportPlan& plan, double tau, const GridSpec& spec);

/// (sum |v|^p cell^2)^(1/p), or max |v| for p = infinity.
double lp_norm(const GridField& field, double p);

/// A value that may be a flagged +infinity.
struct Flagged {
    double value = 0.0;
    bool infinite = false;
};

struct BoundFactors {
    Flagged time_integral;  // int_0^tau (1-t)^(1-p) dt
    Flagged data_integral;  // sum (m/l)^p l D^(2-p)
};

/// The two factors of the L^p bound for sigma^(tau) in the plane. The
/// boundary density of each source atom is mass / width; atoms of width 0
/// (jumps) make the data integral infinite. `f_plus` must be the source
/// measure the plan was solved from. Rejects p <= 1 and tau outside (0, 1].
BoundFactors lp_bound_factors(const TransportPlan& plan, const BoundaryMeasure& f_plus, double p,
                             double tau);

/// sum mass * ||x - y||, the total mass of the transport density.
double density_mass(const TransportPlan& plan);

}  // namespace lgt
