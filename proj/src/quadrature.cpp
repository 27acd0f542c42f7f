#include "lgt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace lgt {

GaussRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

double integrate_fixed(const GaussRule& rule, const std::function<double(double)>& f, double a,
                       double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return sum * half;
}

namespace {

// Kronrod-15 nodes on [-1, 1] (non-negative half) with Kronrod and embedded
// Gauss-7 weights; odd indices are the Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

Rule15 make_rule15() {
    Rule15 r;
    for (int i = 0; i < 7; ++i) {
        r.x[i] = -kXk[i];
        r.x[14 - i] = kXk[i];
        r.wk[i] = r.wk[14 - i] = kWk[i];
        const double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
        r.wg[i] = r.wg[14 - i] = g;
    }
    r.x[7] = 0.0;
    r.wk[7] = kWk[7];
    r.wg[7] = kWg[3];
    return r;
}

struct Region {
    double x0, x1, y0, y1;
    double value;
    double error;
    bool split_x;
    bool operator<(const Region& o) const { return error < o.error; }
};

Region evaluate(const std::function<double(double, double)>& f, const Rule15& rule, double x0,
                double x1, double y0, double y1) {
    const double cx = 0.5 * (x0 + x1);
    const double hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1);
    const double hy = 0.5 * (y1 - y0);
    double kk = 0.0;
    double gk = 0.0;  // Gauss in x, Kronrod in y
    double kg = 0.0;  // Kronrod in x, Gauss in y
    for (int i = 0; i < 15; ++i) {
        const double x = cx + hx * rule.x[i];
        double col_k = 0.0;
        double col_g = 0.0;
        for (int j = 0; j < 15; ++j) {
            const double v = f(x, cy + hy * rule.x[j]);
            col_k += rule.wk[j] * v;
            col_g += rule.wg[j] * v;
        }
        kk += rule.wk[i] * col_k;
        gk += rule.wg[i] * col_k;
        kg += rule.wk[i] * col_g;
    }
    const double scale = hx * hy;
    const double ex = std::abs(kk - gk) * scale;
    const double ey = std::abs(kk - kg) * scale;
    return {x0, x1, y0, y1, kk * scale, ex + ey, ex >= ey};
}

}  // namespace

CubatureResult integrate_2d(const std::function<double(double, double)>& f, double x0, double x1,
                            double y0, double y1, const CubatureOptions& options) {
    static const Rule15 rule = make_rule15();
    std::priority_queue<Region> heap;
    CubatureResult result;

    Region root = evaluate(f, rule, x0, x1, y0, y1);
    result.evaluations = 225;
    double total = root.value;
    double total_err = root.error;
    heap.push(root);

    int regions = 1;
    while (true) {
        const double target = std::max(options.abs_tol, options.rel_tol * std::abs(total));
        if (total_err <= target) {
            result.converged = true;
            break;
        }
        if (regions >= options.max_regions) break;
        Region worst = heap.top();
        heap.pop();
        Region a, b;
        if (worst.split_x) {
            const double mid = 0.5 * (worst.x0 + worst.x1);
            a = evaluate(f, rule, worst.x0, mid, worst.y0, worst.y1);
            b = evaluate(f, rule, mid, worst.x1, worst.y0, worst.y1);
        } else {
            const double mid = 0.5 * (worst.y0 + worst.y1);
            a = evaluate(f, rule, worst.x0, worst.x1, worst.y0, mid);
            b = evaluate(f, rule, worst.x0, worst.x1, mid, worst.y1);
        }
        result.evaluations += 450;
        total += a.value + b.value - worst.value;
        total_err += a.error + b.error - worst.error;
        heap.push(a);
        heap.push(b);
        ++regions;
    }

    // Re-sum from the leaves so the reported value carries no drift from the
    // incremental updates.
    double value = 0.0;
    double error = 0.0;
    std::vector<Region> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Region& l, const Region& r) {
        return l.x0 != r.x0 ? l.x0 < r.x0 : l.y0 < r.y0;
    });
    for (const auto& leaf : leaves) {
        value += leaf.value;
        error += leaf.error;
    }
    result.value = value;
    result.error = error;
    if (!result.converged) {
        result.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
    }
    return result;
}

}  // namespace lgt
