#pragma once

#include <vector>

#include "lgt/density.hpp"
#include "lgt/geom.hpp"
#include "lgt/measures.hpp"
#include "lgt/transport.hpp"

namespace lgt {

/// One boundary arc of the alternating construction.
struct Arc {
    int pair = 1;       // 1-based pair index n
    bool plus = true;   // carries f^+ (else f^-)
    double start = 0.0; // arclength of the counterclockwise start
    double length = 0.0;
};

/// Pairs of adjacent equal arcs chi_n^+, chi_n^- laid out contiguously from
/// s = 0 in the order chi_1^+, chi_1^-, chi_2^-, chi_2^+, chi_3^+, chi_3^-, ...
/// so consecutive pairs meet sign-to-sign.
struct ArcSystem {
    Domain domain = Domain::disk(1.0);
    int pairs = 0;
    std::vector<double> eps;  // eps[n-1] = arc length of both arcs of pair n
    double scale = 1.0;       // factor applied to the default sequence (1 for custom lengths)
    bool default_sequence = true;
    std::vector<Arc> arcs;    // boundary order

    const Arc& plus_arc(int n) const;
    const Arc& minus_arc(int n) const;
    /// Arclength of the common endpoint of the two arcs of pair n.
    double junction(int n) const;
};

/// sum over n >= 1 of 1 / (n log^2(1 + n)).
double default_sequence_sum();

/// eps_n = scale / (n log^2(1 + n)) with scale chosen so the infinite
/// sequence of pairs fills exactly half the perimeter. The domain must be a
/// disk.
ArcSystem build_arcs(const Domain& disk, int pairs);
/// Custom arc lengths; rejects lists that overflow the perimeter.
ArcSystem build_arcs(const Domain& disk, std::vector<double> eps);

/// int over Delta_n of sigma_n^p, by adaptive cubature in (t, s) over the
/// chart of the pair, with s the horizontal coordinate measured from the
/// junction along the chord direction. Flagged infinite for p >= 3.
Flagged exact_pair_lp(const ArcSystem& arcs, int n, double p, double rel_tol = 1e-8);

/// The pair's f^+ and f^- as `atoms` midpoint atoms of density 1 per arc,
/// and their optimal plan.
struct PairProblem {
    BoundaryMeasure plus;
    BoundaryMeasure minus;
    TransportPlan plan;
};
PairProblem solve_pair(const ArcSystem& arcs, int n, int atoms);

/// Largest mismatch, in arclength, between each plan entry and the
/// reflection of its source across the pair junction.
double reflection_defect(const ArcSystem& arcs, int n, const TransportPlan& plan);

enum class CexMode { exact, grid };

struct CexOptions {
    double p = 2.0;
    CexMode mode = CexMode::exact;
    int grid = 512;   // grid mode: cells along the diameter
    int atoms = 64;   // grid mode: atoms per arc
    double rel_tol = 1e-8;
};

struct PairReport {
    int n = 0;
    double eps = 0.0;
    Flagged value;          // ||sigma_n||_p^p
    double reference = 0.0; // eps^(3-p)
};

struct CexReport {
    std::vector<PairReport> per_pair;
    Flagged partial_sum;
    double reference_sum = 0.0;
    double ratio = 0.0;     // partial_sum / reference_sum, inf if flagged
    bool divergent = false; // p >= 3: the exact integrals diverge
};

CexReport run_counterexample(const ArcSystem& arcs, const CexOptions& options);

}  // namespace lgt
