#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lgt/geom.hpp"
#include "lgt/measures.hpp"

namespace lgt {

/// Dense n x m cost table, row-major.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), c_(rows * cols) {}
    CostMatrix(std::span<const Vec2> sources, std::span<const Vec2> targets, const Norm& norm);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return c_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return c_[i * cols_ + j]; }
    const std::vector<double>& data() const { return c_; }
    double max() const;

private:
    std::size_t rows_, cols_;
    std::vector<double> c_;
};

struct PlanEntry {
    int i = 0;  // source atom
    int j = 0;  // target atom
    double mass = 0.0;
};

struct BasisCell {
    int i = 0;
    int j = 0;
};

struct SolverOptions {
    /// 0 scans the tableau in row-major order; any other value scans rows in
    /// a seeded random order, which changes how ties between equal-cost
    /// optima are broken.
    std::uint64_t seed = 0;
    /// Consecutive degenerate pivots tolerated before switching to Bland's
    /// rule; 0 selects 2 * (n + m) with a floor of 1000.
    long degenerate_limit = 0;
    long max_pivots = 200'000'000;
};

struct SolveStats {
    long pivots = 0;
    long degenerate_pivots = 0;
    long bland_pivots = 0;
};

/// Optimal basic solution of a transportation problem.
struct TransportSolution {
    std::vector<PlanEntry> entries;        // positive flows, sorted by (i, j)
    std::vector<BasisCell> degenerate;     // zero-flow basic cells
    std::vector<double> phi_source;
    std::vector<double> phi_target;
    double cost = 0.0;
    SolveStats stats;
};

/// Transportation simplex: northwest-corner start, tree-based MODI
/// potentials, block pricing, Bland's rule after long degenerate streaks.
/// Supplies and demands must balance within 1e-9 relative; demands are
/// rescaled to the supply total before solving.
TransportSolution solve_transportation(std::span<const double> supply,
                                       std::span<const double> demand, const CostMatrix& cost,
                                       const SolverOptions& options = {});

/// A transport plan between atomic measures on the boundary, carrying the
/// geometry it was solved on.
struct TransportPlan {
    std::vector<Vec2> sources;
    std::vector<Vec2> targets;
    std::vector<double> source_mass;
    std::vector<double> target_mass;
    std::vector<double> source_s;  // arclength, empty when not on a boundary
    std::vector<double> target_s;
    std::vector<PlanEntry> entries;
    std::vector<BasisCell> degenerate;
    Norm norm = Norm::euclidean();
    double cost = 0.0;
    SolveStats stats;

    double entry_cost(const PlanEntry& e) const { return norm(targets[e.j] - sources[e.i]); }
    double pair_cost(int i, int j) const { return norm(targets[j] - sources[i]); }
};

TransportPlan solve_kantorovich(const Domain& domain, const Norm& norm,
                                const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus,
                                const SolverOptions& options = {});
TransportPlan solve_kantorovich(std::vector<Vec2> sources, std::vector<double> source_mass,
                                std::vector<Vec2> targets, std::vector<double> target_mass,
                                const Norm& norm, const SolverOptions& options = {});

/// Exhaustive optimum over all n! assignments; equal unit masses, n = m <= 8.
TransportPlan brute_force_plan(const Domain& domain, const Norm& norm,
                               const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus);

struct DualPotentials {
    std::vector<double> phi_source;
    std::vector<double> phi_target;
    int components = 0;
};

/// Potentials from complementary slackness on the plan support (plus its
/// degenerate basic cells). Each connected component of the support graph
/// is anchored by setting its lowest-index target (else source) to 0.
DualPotentials dual_potentials(const TransportPlan& plan);

/// cost - (sum phi_source * mass - sum phi_target * mass).
double duality_gap(const TransportPlan& plan, const DualPotentials& potentials);

/// max over pairs of phi_source(i) - phi_target(j) - cost(i, j). With
/// sample_pairs > 0 only that many random pairs are inspected.
double max_dual_violation(const TransportPlan& plan, const DualPotentials& potentials,
                          long sample_pairs = 0, std::uint64_t seed = 1);

/// Pairs of support segments (entry indices) that cross at a point interior
/// to both.
std::vector<std::pair<std::size_t, std::size_t>> check_noncrossing(const TransportPlan& plan,
                                                                   double tol = 1e-10);

struct Displacements {
    /// Mass-weighted mean Euclidean chord length per source atom.
    std::vector<double> length;
    /// Number of distinct targets per source atom; > 1 flags a split atom.
    std::vector<int> multiplicity;
    bool any_split = false;
};

Displacements displacement_lengths(const TransportPlan& plan);

/// The same plan read from targets to sources.
TransportPlan reversed(const TransportPlan& plan);

}  // namespace lgt
