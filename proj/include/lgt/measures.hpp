#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lgt/geom.hpp"

namespace lgt {

/// A point mass on the boundary. Atoms produced by quadrature remember the
/// arclength `width` of the cell they stand for (so mass / width is a
/// boundary density); atoms of genuine Dirac masses have width 0.
struct Atom {
    double s = 0.0;
    double mass = 0.0;
    double width = 0.0;
};

/// Finite atomic positive measure on the boundary, indexed by arclength.
/// Atoms are kept sorted by s, with zero masses dropped and positions closer
/// than 1e-12 * perimeter merged.
class BoundaryMeasure {
public:
    BoundaryMeasure() = default;
    BoundaryMeasure(std::vector<Atom> atoms, double perimeter);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const { return total_; }
    double perimeter() const { return perimeter_; }
    std::vector<Vec2> points(const Domain& domain) const;
    std::vector<double> masses() const;

private:
    std::vector<Atom> atoms_;
    double total_ = 0.0;
    double perimeter_ = 0.0;
};

struct DatumSample {
    double s = 0.0;
    double g = 0.0;
};

struct DatumJump {
    double s = 0.0;
    double height = 0.0;
};

/// Boundary datum g in BV of the boundary: a periodic piecewise-linear
/// interpolant of the samples plus explicit jumps. g is right-continuous at
/// jumps: value(s_j) already includes the jump at s_j.
class BoundaryDatum {
public:
    /// Rejects data that do not close up (jumps not summing to zero, or a
    /// sample at s = perimeter disagreeing with the one at s = 0).
    BoundaryDatum(std::vector<DatumSample> samples, std::vector<DatumJump> jumps,
                  double perimeter);

    /// Piecewise-linear interpolant of g on `segments` equal arclength cells.
    static BoundaryDatum from_function(const std::function<double(double)>& g, double perimeter,
                                       int segments);
    /// Antiderivative of f (integrated per cell with Gauss-Legendre), g(0) = g0.
    /// f must have zero mean over the boundary.
    static BoundaryDatum from_derivative(const std::function<double(double)>& f, double perimeter,
                                         int segments, double g0 = 0.0);

    const std::vector<DatumSample>& samples() const { return samples_; }
    const std::vector<DatumJump>& jumps() const { return jumps_; }
    double perimeter() const { return perimeter_; }

    double value(double s) const;
    double total_variation() const;

private:
    double linear_part(double s) const;

    std::vector<DatumSample> samples_;
    std::vector<DatumJump> jumps_;
    double perimeter_;
};

struct SignedMeasure {
    BoundaryMeasure plus;
    BoundaryMeasure minus;
};

/// f = dg/ds split into positive and negative parts. Jumps become atoms of
/// mass |jump|; each linear piece becomes n_quad midpoint atoms of mass
/// |slope| * sublength.
SignedMeasure tangential_derivative(const BoundaryDatum& g, int n_quad);

/// Cancels mass shared by f_plus and f_minus at coincident atom positions.
SignedMeasure remove_common_mass(const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus);

/// n midpoint atoms of density over [a, b] (arclength, may exceed perimeter
/// and wrap).
BoundaryMeasure quadrature_atoms(const std::function<double(double)>& density, double a, double b,
                                 int n, double perimeter);

}  // namespace lgt
