#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lgt/random.hpp"
#include "lgt/vec2.hpp"

namespace lgt {

enum class DomainKind { disk, ellipse, radial };

/// Star-shaped boundary r = rho(theta) given as a truncated Fourier series
/// rho(theta) = r0 + sum_k cos_k cos(k theta) + sin_k sin(k theta), k >= 1.
struct RadialProfile {
    double r0 = 1.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    /// rho and its first two derivatives at theta.
    void eval(double theta, double& rho, double& d1, double& d2) const;
    double operator()(double theta) const;
};

struct Box {
    Vec2 lo;
    Vec2 hi;
};

/// A uniformly convex planar domain, parameterized by counterclockwise
/// arclength s in [0, perimeter). Immutable and cheap to copy.
class Domain {
public:
    static Domain disk(double radius);
    static Domain ellipse(double a, double b);
    /// Rejects profiles that are not positive or not uniformly convex on
    /// 4096 angle samples.
    static Domain radial(RadialProfile profile);

    DomainKind kind() const;
    std::string describe() const;
    double perimeter() const;
    /// Lower bound kappa of the boundary curvature.
    double curvature_min() const;
    double diameter() const;
    Box bounding_box() const;

    /// Arclength positions outside [0, perimeter) wrap around.
    double wrap(double s) const;
    Vec2 point(double s) const;
    Vec2 tangent(double s) const;
    Vec2 inward_normal(double s) const;
    double curvature(double s) const;
    /// Curve angle parameter theta of arclength s (polar angle for disk and
    /// radial domains, eccentric anomaly for ellipses).
    double theta_of(double s) const;
    double arclength_of(double theta) const;

    /// Strict interior test.
    bool contains(Vec2 p) const;

    // Shape parameters, meaningful for the matching kind only.
    double radius() const;
    double semi_axis_a() const;
    double semi_axis_b() const;
    const RadialProfile& profile() const;

    struct Impl;

private:
    explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

enum class NormKind { euclidean, lq, quadratic };

/// A strictly convex norm on the plane with closed-form dual.
class Norm {
public:
    static Norm euclidean();
    /// 1 < q < infinity.
    static Norm lq(double q);
    /// sqrt(v^T A v); A must be symmetric positive-definite.
    static Norm quadratic(Sym2 a);

    NormKind kind() const { return kind_; }
    double exponent() const { return q_; }
    const Sym2& matrix() const { return a_; }
    std::string describe() const;

    double operator()(Vec2 v) const;
    /// sup { v . xi : ||xi|| <= 1 }.
    double dual(Vec2 v) const;
    Norm dual_norm() const;
    /// The anisotropy phi(z) = ||R_{pi/2} z|| whose rotation-norm is *this.
    Norm rotated() const;

    /// c0 |v| <= ||v|| <= c1 |v|.
    double lower_constant() const;
    double upper_constant() const;

private:
    Norm(NormKind kind, double q, Sym2 a) : kind_(kind), q_(q), a_(a) {}
    NormKind kind_;
    double q_;
    Sym2 a_;
};

double norm_eval(const Norm& norm, Vec2 v);
double dual_norm_eval(const Norm& norm, Vec2 v);

/// ||boundary_point(s2) - boundary_point(s1)||.
double chord_cost(const Norm& norm, const Domain& domain, double s1, double s2);

/// Smallest observed ratio (y - x).n(x) / |x - y|^2 over random boundary
/// pairs: an empirical value of the constant in the uniform convexity
/// inequality.
double curvature_inequality_constant(const Domain& domain, int pairs, Rng& rng);

}  // namespace lgt
