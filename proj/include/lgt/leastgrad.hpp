#pragma once

#include <vector>

#include "lgt/density.hpp"
#include "lgt/geom.hpp"
#include "lgt/measures.hpp"
#include "lgt/random.hpp"
#include "lgt/transport.hpp"

namespace lgt {

struct FlowSegment {
    Vec2 a;  // source end
    Vec2 b;  // target end
    double mass = 0.0;
};

/// Support of the vector flow carried by a plan, one oriented segment per
/// entry.
struct SegmentFlow {
    std::vector<FlowSegment> segments;
};

SegmentFlow flow_from_plan(const TransportPlan& plan);

struct ReconstructOptions {
    double anchor_s = 0.0;
};

/// Piecewise-constant u from its jump set. The value at a grid center c is
/// g(anchor) plus the signed masses of the segments crossed by the straight
/// path from the anchor boundary point A to c: a segment a->b adds +mass if A
/// lies to its left and -mass otherwise. Since every segment is a chord of a
/// convex domain, the path crosses it exactly when c lies strictly on the
/// other side of the chord's line, which is what is evaluated (also for
/// centers outside the domain, extending u across the boundary). An anchor
/// that sits on a segment endpoint is slid along the boundary by multiples
/// of 1e-9 * diameter until it is clear.
GridField reconstruct_u(const SegmentFlow& flow, const BoundaryDatum& g, const Domain& domain,
                        const GridSpec& spec, const ReconstructOptions& options = {});

/// Per-cell anisotropy(forward-difference gradient) for cells whose centers
/// lie in the domain, zero elsewhere.
GridField gradient_magnitude(const GridField& u, const Norm& anisotropy, const Domain& domain);

/// Sum of gradient_magnitude * cell^2.
double total_variation(const GridField& u, const Norm& anisotropy, const Domain& domain);

/// max over `samples` boundary points of |u(x + 2h n(x)) - g(x)|, u read by
/// bilinear interpolation.
double trace_error(const GridField& u, const BoundaryDatum& g, const Domain& domain,
                   int samples = 4096);

/// max |u(x) - u(y)| / |x - y|^alpha over random pairs of in-domain cell
/// centers at least two cells apart. Reported, never asserted.
double holder_quotient(const GridField& u, const Domain& domain, double alpha, int pairs, Rng& rng);

}  // namespace lgt
