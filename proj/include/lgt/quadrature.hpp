#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lgt {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

/// Integrates f over [a, b] with a fixed Gauss-Legendre rule.
double integrate_fixed(const GaussRule& rule, const std::function<double(double)>& f, double a,
                       double b);

struct CubatureResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct CubatureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_regions = 20000;
};

/// Adaptive cubature over the rectangle [x0, x1] x [y0, y1].
///
/// Each region is integrated with the tensor Kronrod-15 rule; the embedded
/// Gauss-7 rules give separate error indicators per axis, and the region
/// with the largest error is bisected along its worse axis until the total
/// error drops below max(abs_tol, rel_tol * |value|).
CubatureResult integrate_2d(const std::function<double(double, double)>& f, double x0, double x1,
                            double y0, double y1, const CubatureOptions& options = {});

}  // namespace lgt
