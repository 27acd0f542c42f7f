#include "lgt/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lgt/error.hpp"
#include "lgt/quadrature.hpp"

namespace lgt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPanels = 4096;
constexpr int kPanelOrder = 8;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

}  // namespace

void RadialProfile::eval(double theta, double& rho, double& d1, double& d2) const {
    rho = r0;
    d1 = 0.0;
    d2 = 0.0;
    for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double c = std::cos(k * theta);
        const double s = std::sin(k * theta);
        rho += cos_coeffs[i] * c;
        d1 -= cos_coeffs[i] * k * s;
        d2 -= cos_coeffs[i] * k * k * c;
    }
    for (std::size_t i = 0; i < sin_coeffs.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double c = std::cos(k * theta);
        const double s = std::sin(k * theta);
        rho += sin_coeffs[i] * s;
        d1 += sin_coeffs[i] * k * c;
        d2 -= sin_coeffs[i] * k * k * s;
    }
}

double RadialProfile::operator()(double theta) const {
    double rho, d1, d2;
    eval(theta, rho, d1, d2);
    return rho;
}

struct Domain::Impl {
    DomainKind kind = DomainKind::disk;
    double radius = 1.0;
    double a = 1.0;
    double b = 1.0;
    RadialProfile profile;

    double perimeter = 0.0;
    double kappa = 0.0;
    double diameter = 0.0;
    Box box;

    // Cumulative arclength at theta_k = 2 pi k / kPanels (ellipse, radial).
    std::vector<double> cum;
    GaussRule rule;

    void curve(double theta, Vec2& p, Vec2& d1, Vec2& d2) const {
        switch (kind) {
            case DomainKind::disk: {
                const double c = std::cos(theta), s = std::sin(theta);
                p = {radius * c, radius * s};
                d1 = {-radius * s, radius * c};
                d2 = {-radius * c, -radius * s};
                return;
            }
            case DomainKind::ellipse: {
                const double c = std::cos(theta), s = std::sin(theta);
                p = {a * c, b * s};
                d1 = {-a * s, b * c};
                d2 = {-a * c, -b * s};
                return;
            }
            case DomainKind::radial: {
                double r, r1, r2;
                profile.eval(theta, r, r1, r2);
                const double c = std::cos(theta), s = std::sin(theta);
                p = {r * c, r * s};
                d1 = {r1 * c - r * s, r1 * s + r * c};
                d2 = {(r2 - r) * c - 2.0 * r1 * s, (r2 - r) * s + 2.0 * r1 * c};
                return;
            }
        }
    }

    double speed(double theta) const {
        Vec2 p, d1, d2;
        curve(theta, p, d1, d2);
        return length(d1);
    }

    double curvature_at(double theta) const {
        Vec2 p, d1, d2;
        curve(theta, p, d1, d2);
        const double sp = length(d1);
        return cross(d1, d2) / (sp * sp * sp);
    }

    double panel_length(double t0, double t1) const {
        return integrate_fixed(rule, [this](double t) { return speed(t); }, t0, t1);
    }

    void build_table() {
        rule = gauss_legendre(kPanelOrder);
        cum.assign(kPanels + 1, 0.0);
        const double h = kTwoPi / kPanels;
        for (int k = 0; k < kPanels; ++k) {
            cum[k + 1] = cum[k] + panel_length(k * h, (k + 1) * h);
        }
        perimeter = cum[kPanels];
    }

    double theta_of(double s) const {
        if (kind == DomainKind::disk) return s / radius;
        const double h = kTwoPi / kPanels;
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        int k = static_cast<int>(it - cum.begin()) - 1;
        k = std::clamp(k, 0, kPanels - 1);
        const double t0 = k * h;
        const double l0 = cum[k];
        const double l1 = cum[k + 1];
        // Cubic Hermite guess for theta(s) using dtheta/ds = 1/speed at the
        // panel ends, then Newton on the exact panel integral.
        const double u = (s - l0) / (l1 - l0);
        const double dl = l1 - l0;
        const double m0 = dl / speed(t0);
        const double m1 = dl / speed(t0 + h);
        const double u2 = u * u, u3 = u2 * u;
        double theta = t0 * (2 * u3 - 3 * u2 + 1) + m0 * (u3 - 2 * u2 + u) +
                       (t0 + h) * (-2 * u3 + 3 * u2) + m1 * (u3 - u2);
        theta = std::clamp(theta, t0, t0 + h);
        for (int iter = 0; iter < 8; ++iter) {
            const double f = l0 + panel_length(t0, theta) - s;
            const double step = f / speed(theta);
            theta -= step;
            if (std::abs(step) < 1e-15) break;
        }
        return theta;
    }

    double arclength_of(double theta) const {
        theta = wrap_angle(theta);
        if (kind == DomainKind::disk) return radius * theta;
        const double h = kTwoPi / kPanels;
        int k = std::clamp(static_cast<int>(theta / h), 0, kPanels - 1);
        return cum[k] + panel_length(k * h, theta);
    }

    bool contains(Vec2 p) const {
        switch (kind) {
            case DomainKind::disk:
                return p.x * p.x + p.y * p.y < radius * radius;
            case DomainKind::ellipse:
                return (p.x / a) * (p.x / a) + (p.y / b) * (p.y / b) < 1.0;
            case DomainKind::radial: {
                const double r = length(p);
                if (r == 0.0) return true;
                return r < profile(std::atan2(p.y, p.x));
            }
        }
        return false;
    }
};

namespace {

void finish_sampled_geometry(Domain::Impl& impl) {
    std::vector<Vec2> pts(kPanels);
    std::vector<double> curv(kPanels);
    const double h = kTwoPi / kPanels;
    for (int k = 0; k < kPanels; ++k) {
        Vec2 p, d1, d2;
        impl.curve(k * h, p, d1, d2);
        pts[k] = p;
        curv[k] = impl.curvature_at(k * h);
    }

    // Golden-section refinement of the sampled curvature minimum.
    const int kmin = static_cast<int>(std::min_element(curv.begin(), curv.end()) - curv.begin());
    double lo = (kmin - 1) * h, hi = (kmin + 1) * h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = impl.curvature_at(c), fd = impl.curvature_at(d);
    for (int iter = 0; iter < 80; ++iter) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - g * (hi - lo);
            fc = impl.curvature_at(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + g * (hi - lo);
            fd = impl.curvature_at(d);
        }
    }
    impl.kappa = std::min({curv[kmin], fc, fd});

    // Farthest-pair search on the convex sample polygon (rotating calipers).
    double best = 0.0;
    int j = 1;
    auto d2 = [&](int i, int jj) {
        const Vec2 v = pts[i] - pts[jj % kPanels];
        return dot(v, v);
    };
    for (int i = 0; i < kPanels; ++i) {
        if (j <= i) j = i + 1;
        while (j + 1 < i + kPanels && d2(i, j + 1) >= d2(i, j)) ++j;
        best = std::max(best, d2(i, j));
    }
    impl.diameter = std::sqrt(best);

    Box box{pts[0], pts[0]};
    for (const auto& p : pts) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    const double margin = 1e-5 * impl.diameter;
    box.lo = box.lo - Vec2{margin, margin};
    box.hi = box.hi + Vec2{margin, margin};
    impl.box = box;
}

}  // namespace

Domain Domain::disk(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw SchemaError("disk radius must be positive and finite");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = DomainKind::disk;
    impl->radius = radius;
    impl->perimeter = kTwoPi * radius;
    impl->kappa = 1.0 / radius;
    impl->diameter = 2.0 * radius;
    impl->box = {{-radius, -radius}, {radius, radius}};
    return Domain(std::move(impl));
}

Domain Domain::ellipse(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw SchemaError("ellipse semi-axes must be positive and finite");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = DomainKind::ellipse;
    impl->a = a;
    impl->b = b;
    impl->build_table();
    const double big = std::max(a, b), small = std::min(a, b);
    impl->kappa = small / (big * big);
    impl->diameter = 2.0 * big;
    impl->box = {{-a, -b}, {a, b}};
    return Domain(std::move(impl));
}

Domain Domain::radial(RadialProfile profile) {
    auto impl = std::make_shared<Impl>();
    impl->kind = DomainKind::radial;
    impl->profile = std::move(profile);
    const double h = kTwoPi / kPanels;
    for (int k = 0; k < kPanels; ++k) {
        const double theta = k * h;
        if (!(impl->profile(theta) > 0.0)) {
            throw InfeasibleError("radial profile is not strictly positive at theta = " +
                                  std::to_string(theta));
        }
        const double kap = impl->curvature_at(theta);
        if (!(kap > 0.0)) {
            throw InfeasibleError("radial domain is not uniformly convex: curvature " +
                                  std::to_string(kap) + " at theta = " + std::to_string(theta));
        }
    }
    impl->build_table();
    finish_sampled_geometry(*impl);
    return Domain(std::move(impl));
}

DomainKind Domain::kind() const { return impl_->kind; }

std::string Domain::describe() const {
    std::ostringstream os;
    switch (impl_->kind) {
        case DomainKind::disk: os << "disk(" << impl_->radius << ")"; break;
        case DomainKind::ellipse: os << "ellipse(" << impl_->a << "," << impl_->b << ")"; break;
        case DomainKind::radial: os << "radial(r0=" << impl_->profile.r0 << ")"; break;
    }
    return os.str();
}

double Domain::perimeter() const { return impl_->perimeter; }
double Domain::curvature_min() const { return impl_->kappa; }
double Domain::diameter() const { return impl_->diameter; }
Box Domain::bounding_box() const { return impl_->box; }

double Domain::wrap(double s) const {
    const double p = impl_->perimeter;
    double r = std::fmod(s, p);
    if (r < 0.0) r += p;
    if (r >= p) r = 0.0;
    return r;
}

double Domain::theta_of(double s) const { return impl_->theta_of(wrap(s)); }
double Domain::arclength_of(double theta) const { return impl_->arclength_of(theta); }

Vec2 Domain::point(double s) const {
    Vec2 p, d1, d2;
    impl_->curve(theta_of(s), p, d1, d2);
    return p;
}

Vec2 Domain::tangent(double s) const {
    Vec2 p, d1, d2;
    impl_->curve(theta_of(s), p, d1, d2);
    return d1 / length(d1);
}

Vec2 Domain::inward_normal(double s) const { return rotate_ccw(tangent(s)); }

double Domain::curvature(double s) const { return impl_->curvature_at(theta_of(s)); }

bool Domain::contains(Vec2 p) const { return impl_->contains(p); }

double Domain::radius() const { return impl_->radius; }
double Domain::semi_axis_a() const { return impl_->a; }
double Domain::semi_axis_b() const { return impl_->b; }
const RadialProfile& Domain::profile() const { return impl_->profile; }

// ---------------------------------------------------------------------------
// Norm

Norm Norm::euclidean() { return Norm(NormKind::euclidean, 2.0, Sym2{}); }

Norm Norm::lq(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) {
        throw SchemaError("lq norm needs 1 < q < infinity, got " + std::to_string(q));
    }
    return Norm(NormKind::lq, q, Sym2{});
}

Norm Norm::quadratic(Sym2 a) {
    if (!a.positive_definite()) {
        throw SchemaError("quadratic norm matrix must be symmetric positive-definite");
    }
    return Norm(NormKind::quadratic, 2.0, a);
}

std::string Norm::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case NormKind::euclidean: os << "euclidean"; break;
        case NormKind::lq: os << "lq(" << q_ << ")"; break;
        case NormKind::quadratic:
            os << "quadratic(" << a_.xx << "," << a_.xy << "," << a_.yy << ")";
            break;
    }
    return os.str();
}

namespace {

double lq_eval(Vec2 v, double q) {
    const double ax = std::abs(v.x), ay = std::abs(v.y);
    const double big = std::max(ax, ay);
    if (big == 0.0) return 0.0;
    const double r = std::min(ax, ay) / big;
    return big * std::pow(1.0 + std::pow(r, q), 1.0 / q);
}

}  // namespace

double Norm::operator()(Vec2 v) const {
    switch (kind_) {
        case NormKind::euclidean: return length(v);
        case NormKind::lq: return lq_eval(v, q_);
        case NormKind::quadratic: return std::sqrt(a_.quad(v));
    }
    return 0.0;
}

double Norm::dual(Vec2 v) const {
    switch (kind_) {
        case NormKind::euclidean: return length(v);
        case NormKind::lq: return lq_eval(v, q_ / (q_ - 1.0));
        case NormKind::quadratic: return std::sqrt(a_.inverse().quad(v));
    }
    return 0.0;
}

Norm Norm::dual_norm() const {
    switch (kind_) {
        case NormKind::euclidean: return euclidean();
        case NormKind::lq: return lq(q_ / (q_ - 1.0));
        case NormKind::quadratic: return quadratic(a_.inverse());
    }
    return euclidean();
}

Norm Norm::rotated() const {
    // (R z)^T A (R z) with R the counterclockwise quarter turn.
    if (kind_ == NormKind::quadratic) return quadratic(Sym2{a_.yy, -a_.xy, a_.xx});
    return *this;
}

namespace {

void eigen_range(const Sym2& a, double& lo, double& hi) {
    const double mean = 0.5 * (a.xx + a.yy);
    const double rad = std::hypot(0.5 * (a.xx - a.yy), a.xy);
    lo = mean - rad;
    hi = mean + rad;
}

}  // namespace

double Norm::lower_constant() const {
    switch (kind_) {
        case NormKind::euclidean: return 1.0;
        case NormKind::lq: return q_ >= 2.0 ? std::pow(2.0, 1.0 / q_ - 0.5) : 1.0;
        case NormKind::quadratic: {
            double lo, hi;
            eigen_range(a_, lo, hi);
            return std::sqrt(lo);
        }
    }
    return 1.0;
}

double Norm::upper_constant() const {
    switch (kind_) {
        case NormKind::euclidean: return 1.0;
        case NormKind::lq: return q_ >= 2.0 ? 1.0 : std::pow(2.0, 1.0 / q_ - 0.5);
        case NormKind::quadratic: {
            double lo, hi;
            eigen_range(a_, lo, hi);
            return std::sqrt(hi);
        }
    }
    return 1.0;
}

double norm_eval(const Norm& norm, Vec2 v) { return norm(v); }
double dual_norm_eval(const Norm& norm, Vec2 v) { return norm.dual(v); }

double chord_cost(const Norm& norm, const Domain& domain, double s1, double s2) {
    return norm(domain.point(s2) - domain.point(s1));
}

double curvature_inequality_constant(const Domain& domain, int pairs, Rng& rng) {
    double best = std::numeric_limits<double>::infinity();
    const double per = domain.perimeter();
    for (int k = 0; k < pairs; ++k) {
        const double s = rng.uniform(0.0, per);
        const double t = rng.uniform(0.0, per);
        const Vec2 x = domain.point(s);
        const Vec2 y = domain.point(t);
        const Vec2 d = y - x;
        const double len2 = dot(d, d);
        if (len2 < 1e-12 * per * per) continue;
        best = std::min(best, dot(d, domain.inward_normal(s)) / len2);
    }
    return best;
}

}  // namespace lgt
