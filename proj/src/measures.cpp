#include "lgt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lgt/error.hpp"
#include "lgt/quadrature.hpp"

namespace lgt {

namespace {

double wrap_to(double s, double perimeter) {
    double r = std::fmod(s, perimeter);
    if (r < 0.0) r += perimeter;
    if (r >= perimeter) r = 0.0;
    return r;
}

}  // namespace

BoundaryMeasure::BoundaryMeasure(std::vector<Atom> atoms, double perimeter)
    : perimeter_(perimeter) {
    if (!(perimeter > 0.0)) throw SchemaError("boundary measure needs a positive perimeter");
    for (auto& a : atoms) {
        if (!std::isfinite(a.s) || !std::isfinite(a.mass) || a.mass < 0.0 || a.width < 0.0) {
            throw SchemaError("boundary atoms need finite position and nonnegative mass");
        }
        a.s = wrap_to(a.s, perimeter);
    }
    std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& l, const Atom& r) { return l.s < r.s; });

    const double tol = 1e-12 * perimeter;
    auto absorb = [](Atom& into, const Atom& from) {
        // A Dirac part makes the merged atom a Dirac.
        into.width = (into.width > 0.0 && from.width > 0.0) ? into.width + from.width : 0.0;
        into.mass += from.mass;
    };
    for (const auto& a : atoms) {
        if (!atoms_.empty() && a.s - atoms_.back().s < tol) {
            absorb(atoms_.back(), a);
        } else {
            atoms_.push_back(a);
        }
    }
    if (atoms_.size() > 1 && atoms_.front().s + perimeter - atoms_.back().s < tol) {
        absorb(atoms_.front(), atoms_.back());
        atoms_.pop_back();
    }
    for (const auto& a : atoms_) total_ += a.mass;
}

std::vector<Vec2> BoundaryMeasure::points(const Domain& domain) const {
    std::vector<Vec2> pts;
    pts.reserve(atoms_.size());
    for (const auto& a : atoms_) pts.push_back(domain.point(a.s));
    return pts;
}

std::vector<double> BoundaryMeasure::masses() const {
    std::vector<double> m;
    m.reserve(atoms_.size());
    for (const auto& a : atoms_) m.push_back(a.mass);
    return m;
}

// ---------------------------------------------------------------------------

BoundaryDatum::BoundaryDatum(std::vector<DatumSample> samples, std::vector<DatumJump> jumps,
                             double perimeter)
    : perimeter_(perimeter) {
    if (!(perimeter > 0.0)) throw SchemaError("boundary datum needs a positive perimeter");
    const double end_tol = 1e-12 * perimeter;
    double scale = 1.0;
    for (const auto& p : samples) {
        if (!std::isfinite(p.s) || !std::isfinite(p.g)) {
            throw SchemaError("boundary datum samples must be finite");
        }
        if (p.s < -end_tol || p.s > perimeter + end_tol) {
            throw SchemaError("boundary datum sample outside [0, perimeter]");
        }
        scale = std::max(scale, std::abs(p.g));
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const DatumSample& l, const DatumSample& r) { return l.s < r.s; });

    // A sample at s = perimeter is the closing point of the curve.
    if (!samples.empty() && samples.back().s > perimeter - end_tol) {
        const DatumSample closing = samples.back();
        samples.pop_back();
        if (!samples.empty() && samples.front().s < end_tol) {
            const double imbalance = closing.g - samples.front().g;
            if (std::abs(imbalance) > 1e-12 * scale) {
                std::ostringstream os;
                os << "boundary datum does not close: g(perimeter) - g(0) = " << imbalance
                   << " (mass imbalance of its tangential derivative)";
                throw InfeasibleError(os.str());
            }
        } else {
            samples.insert(samples.begin(), DatumSample{0.0, closing.g});
        }
    }
    for (std::size_t k = 1; k < samples.size(); ++k) {
        if (samples[k].s - samples[k - 1].s < end_tol) {
            throw SchemaError("boundary datum has duplicate sample positions; use jumps instead");
        }
    }

    double jump_sum = 0.0;
    double jump_tv = 0.0;
    for (auto& j : jumps) {
        if (!std::isfinite(j.s) || !std::isfinite(j.height)) {
            throw SchemaError("boundary datum jumps must be finite");
        }
        j.s = wrap_to(j.s, perimeter);
        jump_sum += j.height;
        jump_tv += std::abs(j.height);
    }
    if (std::abs(jump_sum) > 1e-12 * std::max(scale, jump_tv)) {
        std::ostringstream os;
        os << "boundary datum does not close: jumps sum to " << jump_sum
           << " (mass imbalance of its tangential derivative)";
        throw InfeasibleError(os.str());
    }
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const DatumJump& l, const DatumJump& r) { return l.s < r.s; });
    samples_ = std::move(samples);
    jumps_ = std::move(jumps);
}

BoundaryDatum BoundaryDatum::from_function(const std::function<double(double)>& g,
                                           double perimeter, int segments) {
    if (segments < 1) throw SchemaError("from_function needs at least one segment");
    std::vector<DatumSample> samples;
    samples.reserve(segments);
    for (int k = 0; k < segments; ++k) {
        const double s = perimeter * k / segments;
        samples.push_back({s, g(s)});
    }
    return BoundaryDatum(std::move(samples), {}, perimeter);
}

BoundaryDatum BoundaryDatum::from_derivative(const std::function<double(double)>& f,
                                             double perimeter, int segments, double g0) {
    if (segments < 1) throw SchemaError("from_derivative needs at least one segment");
    static const GaussRule rule = gauss_legendre(20);
    std::vector<DatumSample> samples;
    samples.reserve(segments + 1);
    double g = g0;
    for (int k = 0; k < segments; ++k) {
        const double a = perimeter * k / segments;
        const double b = perimeter * (k + 1) / segments;
        samples.push_back({a, g});
        g += integrate_fixed(rule, f, a, b);
    }
    samples.push_back({perimeter, g});
    return BoundaryDatum(std::move(samples), {}, perimeter);
}

double BoundaryDatum::linear_part(double s) const {
    if (samples_.empty()) return 0.0;
    if (samples_.size() == 1) return samples_.front().g;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                               [](double v, const DatumSample& p) { return v < p.s; });
    const DatumSample* left;
    const DatumSample* right;
    double right_s;
    if (it == samples_.begin() || it == samples_.end()) {
        // wrap segment from the last sample to the first one
        left = &samples_.back();
        right = &samples_.front();
        right_s = right->s + perimeter_;
        if (s < left->s) s += perimeter_;
    } else {
        left = &*(it - 1);
        right = &*it;
        right_s = right->s;
    }
    const double u = (s - left->s) / (right_s - left->s);
    return left->g + u * (right->g - left->g);
}

double BoundaryDatum::value(double s) const {
    s = wrap_to(s, perimeter_);
    double v = linear_part(s);
    for (const auto& j : jumps_) {
        if (j.s <= s) v += j.height;
    }
    return v;
}

double BoundaryDatum::total_variation() const {
    double tv = 0.0;
    for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
        tv += std::abs(samples_[k + 1].g - samples_[k].g);
    }
    if (samples_.size() > 1) tv += std::abs(samples_.front().g - samples_.back().g);
    for (const auto& j : jumps_) tv += std::abs(j.height);
    return tv;
}

// ---------------------------------------------------------------------------

SignedMeasure tangential_derivative(const BoundaryDatum& g, int n_quad) {
    if (n_quad < 1) throw SchemaError("tangential_derivative needs n_quad >= 1");
    const double per = g.perimeter();
    std::vector<Atom> plus, minus;
    const auto& smp = g.samples();
    const std::size_t n = smp.size();
    if (n > 1) {
        for (std::size_t k = 0; k < n; ++k) {
            const DatumSample& a = smp[k];
            const DatumSample& b = smp[(k + 1) % n];
            const double s0 = a.s;
            const double s1 = (k + 1 == n) ? b.s + per : b.s;
            const double dg = b.g - a.g;
            if (dg == 0.0) continue;
            const double width = (s1 - s0) / n_quad;
            auto& target = dg > 0.0 ? plus : minus;
            for (int q = 0; q < n_quad; ++q) {
                target.push_back({s0 + (q + 0.5) * width, std::abs(dg) / n_quad, width});
            }
        }
    }
    for (const auto& j : g.jumps()) {
        if (j.height > 0.0) plus.push_back({j.s, j.height, 0.0});
        if (j.height < 0.0) minus.push_back({j.s, -j.height, 0.0});
    }
    SignedMeasure out{BoundaryMeasure(std::move(plus), per), BoundaryMeasure(std::move(minus), per)};
    const double imbalance = out.plus.total_mass() - out.minus.total_mass();
    if (std::abs(imbalance) > 1e-10 * std::max(1.0, g.total_variation())) {
        std::ostringstream os;
        os << "tangential derivative is unbalanced by " << imbalance;
        throw InfeasibleError(os.str());
    }
    return out;
}

SignedMeasure remove_common_mass(const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus) {
    const double per = std::max(f_plus.perimeter(), f_minus.perimeter());
    if (per == 0.0) return {f_plus, f_minus};
    const double tol = 1e-12 * per;
    std::vector<Atom> plus = f_plus.atoms();
    std::vector<Atom> minus = f_minus.atoms();
    std::size_t i = 0, j = 0;
    while (i < plus.size() && j < minus.size()) {
        const double d = plus[i].s - minus[j].s;
        if (std::abs(d) < tol) {
            const double common = std::min(plus[i].mass, minus[j].mass);
            plus[i].mass -= common;
            minus[j].mass -= common;
            ++i;
            ++j;
        } else if (d < 0.0) {
            ++i;
        } else {
            ++j;
        }
    }
    // coincidence across the s = 0 seam
    if (!plus.empty() && !minus.empty()) {
        auto seam = [&](Atom& lo, Atom& hi) {
            if (lo.s + per - hi.s < tol) {
                const double common = std::min(lo.mass, hi.mass);
                lo.mass -= common;
                hi.mass -= common;
            }
        };
        seam(plus.front(), minus.back());
        seam(minus.front(), plus.back());
    }
    return {BoundaryMeasure(std::move(plus), per), BoundaryMeasure(std::move(minus), per)};
}

BoundaryMeasure quadrature_atoms(const std::function<double(double)>& density, double a, double b,
                                 int n, double perimeter) {
    if (n < 1) throw SchemaError("quadrature_atoms needs n >= 1");
    if (!(b > a)) throw SchemaError("quadrature_atoms needs a non-empty support interval");
    const double width = (b - a) / n;
    std::vector<Atom> atoms;
    atoms.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double s = a + (k + 0.5) * width;
        const double rho = density(s);
        if (rho < 0.0 || !std::isfinite(rho)) {
            throw SchemaError("quadrature_atoms: density must be finite and nonnegative");
        }
        atoms.push_back({s, rho * width, width});
    }
    return BoundaryMeasure(std::move(atoms), perimeter);
}

}  // namespace lgt
