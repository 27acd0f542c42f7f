#include "lgt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lgt/error.hpp"
#include "lgt/random.hpp"

namespace lgt {

CostMatrix::CostMatrix(std::span<const Vec2> sources, std::span<const Vec2> targets,
                       const Norm& norm)
    : CostMatrix(sources.size(), targets.size()) {
    for (std::size_t i = 0; i < rows_; ++i) {
        double* row = &c_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) row[j] = norm(targets[j] - sources[i]);
    }
}

double CostMatrix::max() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

class NetworkSimplex {
public:
    NetworkSimplex(std::span<const double> supply, std::span<const double> demand,
                   const CostMatrix& cost, const SolverOptions& options)
        : n_(static_cast<int>(supply.size())),
          m_(static_cast<int>(demand.size())),
          nodes_(n_ + m_),
          cost_(cost.data()),
          options_(options) {
        supply_.assign(supply.begin(), supply.end());
        demand_.assign(demand.begin(), demand.end());
        double ts = 0.0, td = 0.0;
        for (double s : supply_) ts += s;
        for (double d : demand_) td += d;
        total_ = ts;
        const double scale = ts / td;
        for (double& d : demand_) d *= scale;

        eps_ = 1e-11 * std::max(cost.max(), std::numeric_limits<double>::min());
        degenerate_limit_ = options.degenerate_limit > 0
                                ? options.degenerate_limit
                                : std::max<long>(1000, 2L * nodes_);

        row_order_.resize(n_);
        std::iota(row_order_.begin(), row_order_.end(), 0);
        if (options.seed != 0) {
            Rng rng(options.seed);
            for (int k = n_ - 1; k > 0; --k) std::swap(row_order_[k], row_order_[rng.integer(0, k)]);
        }
        const double cells = static_cast<double>(n_) * m_;
        block_ = std::max<long>(10, static_cast<long>(std::sqrt(cells)));
    }

    TransportSolution run() {
        initial_tree();
        SolveStats stats;
        long degenerate_streak = 0;
        while (true) {
            const bool bland = degenerate_streak >= degenerate_limit_;
            int ei, ej;
            const bool found = bland ? price_bland(ei, ej) : price_block(ei, ej);
            if (!found) break;
            const double theta = pivot(ei, ej, bland);
            ++stats.pivots;
            if (bland) ++stats.bland_pivots;
            if (theta <= 0.0) {
                ++stats.degenerate_pivots;
                ++degenerate_streak;
            } else {
                degenerate_streak = 0;
            }
            if (stats.pivots > options_.max_pivots) {
                throw std::runtime_error("transportation simplex exceeded its pivot budget");
            }
        }
        return finish(stats);
    }

private:
    double c(int i, int j) const { return cost_[static_cast<std::size_t>(i) * m_ + j]; }
    double cell_cost(long long cell) const { return cost_[static_cast<std::size_t>(cell)]; }

    void set_potential(int v) {
        const int p = parent_[v];
        const long long cell = parent_cell_[v];
        if (v < n_) {
            pot_[v] = pot_[p] + cell_cost(cell);
        } else {
            pot_[v] = pot_[p] - cell_cost(cell);
        }
        depth_[v] = depth_[p] + 1;
    }

    void link(int u, int v) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }

    static void unlink_one(std::vector<int>& list, int v) {
        auto it = std::find(list.begin(), list.end(), v);
        *it = list.back();
        list.pop_back();
    }

    // Northwest-corner basis over sources in index order and targets in
    // reverse index order. Atoms arrive sorted by arclength, so the reversed
    // target order starts from a nested (non-crossing) pairing.
    void initial_tree() {
        adj_.assign(nodes_, {});
        parent_.assign(nodes_, -1);
        parent_cell_.assign(nodes_, -1);
        flow_.assign(nodes_, 0.0);
        depth_.assign(nodes_, 0);
        pot_.assign(nodes_, 0.0);

        std::vector<double> s = supply_, d = demand_;
        std::vector<std::pair<int, int>> cells;
        std::vector<double> cell_flow;
        int i = 0, k = 0;
        while (true) {
            const int j = m_ - 1 - k;
            const double x = std::min(s[i], d[j]);
            cells.emplace_back(i, j);
            cell_flow.push_back(x);
            s[i] -= x;
            d[j] -= x;
            if (i == n_ - 1 && k == m_ - 1) break;
            if (k == m_ - 1 || (i < n_ - 1 && s[i] <= d[j])) {
                ++i;
            } else {
                ++k;
            }
        }
        std::vector<std::vector<std::pair<int, double>>> edges(nodes_);
        for (std::size_t e = 0; e < cells.size(); ++e) {
            const int a = cells[e].first, b = n_ + cells[e].second;
            link(a, b);
        }
        // orient from root 0 and record flows
        std::vector<double> flows(cells.size());
        std::vector<int> order{0};
        std::vector<char> seen(nodes_, 0);
        seen[0] = 1;
        // map node pair -> flow via a lookup on the staircase cells
        std::vector<std::vector<std::pair<int, double>>> nb_flow(nodes_);
        for (std::size_t e = 0; e < cells.size(); ++e) {
            const int a = cells[e].first, b = n_ + cells[e].second;
            nb_flow[a].emplace_back(b, cell_flow[e]);
            nb_flow[b].emplace_back(a, cell_flow[e]);
        }
        for (std::size_t h = 0; h < order.size(); ++h) {
            const int v = order[h];
            for (const auto& [w, f] : nb_flow[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                parent_[w] = v;
                const int si = w < n_ ? w : v;
                const int tj = w < n_ ? v - n_ : w - n_;
                parent_cell_[w] = static_cast<long long>(si) * m_ + tj;
                flow_[w] = f;
                set_potential(w);
                order.push_back(w);
            }
        }
        if (static_cast<int>(order.size()) != nodes_) {
            throw std::logic_error("northwest-corner basis is not a spanning tree");
        }
    }

    bool price_block(int& ei, int& ej) {
        const long long total = static_cast<long long>(n_) * m_;
        double best = -eps_;
        int bi = -1, bj = -1;
        long long scanned = 0;
        long in_block = 0;
        int r = scan_row_, col = scan_col_;
        while (scanned < total) {
            const int i = row_order_[r];
            const double* row = &cost_[static_cast<std::size_t>(i) * m_];
            const double pi = pot_[i];
            const double* pt = &pot_[n_];
            for (; col < m_; ++col) {
                const double rc = row[col] - pi + pt[col];
                if (rc < best) {
                    best = rc;
                    bi = i;
                    bj = col;
                }
                ++scanned;
                if (++in_block == block_) {
                    in_block = 0;
                    if (bi >= 0) {
                        scan_row_ = r;
                        scan_col_ = col + 1;
                        if (scan_col_ == m_) {
                            scan_col_ = 0;
                            scan_row_ = (r + 1) % n_;
                        }
                        ei = bi;
                        ej = bj;
                        return true;
                    }
                }
                if (scanned == total) break;
            }
            if (scanned == total) break;
            col = 0;
            r = (r + 1) % n_;
        }
        if (bi >= 0) {
            ei = bi;
            ej = bj;
            return true;
        }
        return false;
    }

    bool price_bland(int& ei, int& ej) const {
        for (int i = 0; i < n_; ++i) {
            const double* row = &cost_[static_cast<std::size_t>(i) * m_];
            for (int j = 0; j < m_; ++j) {
                if (row[j] - pot_[i] + pot_[n_ + j] < -eps_) {
                    ei = i;
                    ej = j;
                    return true;
                }
            }
        }
        return false;
    }

    double pivot(int ei, int ej, bool bland) {
        const int a = ei, b = n_ + ej;
        path_a_.clear();
        path_b_.clear();
        int u = a, v = b;
        while (depth_[u] > depth_[v]) { path_a_.push_back(u); u = parent_[u]; }
        while (depth_[v] > depth_[u]) { path_b_.push_back(v); v = parent_[v]; }
        while (u != v) {
            path_a_.push_back(u);
            u = parent_[u];
            path_b_.push_back(v);
            v = parent_[v];
        }

        // Walk the cycle in flow direction from the apex: down the source
        // side, across the entering cell, up the target side. Default rule
        // keeps the last blocking edge; Bland keeps the smallest cell index.
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        auto consider = [&](int w) {
            const double f = flow_[w];
            if (leave < 0 || f < theta) {
                theta = f;
                leave = w;
            } else if (f == theta) {
                if (bland) {
                    if (parent_cell_[w] < parent_cell_[leave]) leave = w;
                } else {
                    leave = w;
                }
            }
        };
        for (auto it = path_a_.rbegin(); it != path_a_.rend(); ++it) {
            if (*it < n_) consider(*it);
        }
        for (int w : path_b_) {
            if (w >= n_) consider(w);
        }

        if (theta > 0.0) {
            for (int w : path_a_) flow_[w] += (w < n_) ? -theta : theta;
            for (int w : path_b_) flow_[w] += (w >= n_) ? -theta : theta;
        }

        const bool on_b = leave >= n_ ? std::find(path_b_.begin(), path_b_.end(), leave) != path_b_.end()
                                      : std::find(path_b_.begin(), path_b_.end(), leave) != path_b_.end();
        const int q = on_b ? b : a;
        const int other = on_b ? a : b;

        reroot_.clear();
        for (int x = q;; x = parent_[x]) {
            reroot_.push_back(x);
            if (x == leave) break;
        }
        const int old_parent = parent_[leave];
        unlink_one(adj_[leave], old_parent);
        unlink_one(adj_[old_parent], leave);
        for (std::size_t k = reroot_.size() - 1; k >= 1; --k) {
            const int x = reroot_[k], y = reroot_[k - 1];
            parent_[x] = y;
            parent_cell_[x] = parent_cell_[y];
            flow_[x] = flow_[y];
        }
        parent_[q] = other;
        parent_cell_[q] = static_cast<long long>(ei) * m_ + ej;
        flow_[q] = theta;
        link(q, other);

        stack_.clear();
        stack_.push_back(q);
        while (!stack_.empty()) {
            const int x = stack_.back();
            stack_.pop_back();
            set_potential(x);
            for (int y : adj_[x]) {
                if (y != parent_[x]) stack_.push_back(y);
            }
        }
        return theta;
    }

    TransportSolution finish(const SolveStats& stats) {
        // Recompute flows exactly from the final basis by leaf elimination,
        // and potentials by a fresh traversal from the root.
        std::vector<int> order{0};
        order.reserve(nodes_);
        std::vector<char> seen(nodes_, 0);
        seen[0] = 1;
        pot_[0] = 0.0;
        depth_[0] = 0;
        for (std::size_t h = 0; h < order.size(); ++h) {
            const int v = order[h];
            for (int w : adj_[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                set_potential(w);
                order.push_back(w);
            }
        }
        std::vector<double> net(nodes_);
        for (int i = 0; i < n_; ++i) net[i] = supply_[i];
        for (int j = 0; j < m_; ++j) net[n_ + j] = -demand_[j];
        const double zero_tol = 1e-14 * std::max(total_, std::numeric_limits<double>::min());

        TransportSolution sol;
        for (std::size_t h = order.size(); h-- > 1;) {
            const int v = order[h];
            double f = v < n_ ? net[v] : -net[v];
            net[parent_[v]] += net[v];
            const long long cell = parent_cell_[v];
            const int ci = static_cast<int>(cell / m_);
            const int cj = static_cast<int>(cell % m_);
            if (f <= zero_tol) {
                sol.degenerate.push_back({ci, cj});
            } else {
                sol.entries.push_back({ci, cj, f});
            }
        }
        auto by_cell = [](const auto& l, const auto& r) {
            return l.i != r.i ? l.i < r.i : l.j < r.j;
        };
        std::sort(sol.entries.begin(), sol.entries.end(), by_cell);
        std::sort(sol.degenerate.begin(), sol.degenerate.end(), by_cell);
        for (const auto& e : sol.entries) sol.cost += e.mass * c(e.i, e.j);
        sol.phi_source.assign(pot_.begin(), pot_.begin() + n_);
        sol.phi_target.assign(pot_.begin() + n_, pot_.end());
        sol.stats = stats;
        return sol;
    }

    int n_, m_, nodes_;
    const std::vector<double>& cost_;
    SolverOptions options_;
    std::vector<double> supply_, demand_;
    double total_ = 0.0;
    double eps_ = 0.0;
    long degenerate_limit_ = 0;
    long block_ = 10;
    std::vector<int> row_order_;
    int scan_row_ = 0, scan_col_ = 0;

    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_;
    std::vector<long long> parent_cell_;
    std::vector<double> flow_;
    std::vector<int> depth_;
    std::vector<double> pot_;

    std::vector<int> path_a_, path_b_, reroot_, stack_;
};

void check_balance(std::span<const double> supply, std::span<const double> demand) {
    if (supply.empty() || demand.empty()) {
        throw InfeasibleError("transport needs nonempty source and target measures");
    }
    double ts = 0.0, td = 0.0;
    for (double s : supply) {
        if (!(s > 0.0) || !std::isfinite(s)) throw SchemaError("supplies must be positive");
        ts += s;
    }
    for (double d : demand) {
        if (!(d > 0.0) || !std::isfinite(d)) throw SchemaError("demands must be positive");
        td += d;
    }
    if (std::abs(ts - td) > 1e-9 * std::max(ts, td)) {
        std::ostringstream os;
        os << "mass imbalance: source mass " << ts << " vs target mass " << td;
        throw InfeasibleError(os.str());
    }
}

}  // namespace

TransportSolution solve_transportation(std::span<const double> supply,
                                       std::span<const double> demand, const CostMatrix& cost,
                                       const SolverOptions& options) {
    check_balance(supply, demand);
    if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
        throw std::invalid_argument("cost matrix shape does not match the marginals");
    }
    NetworkSimplex simplex(supply, demand, cost, options);
    return simplex.run();
}

TransportPlan solve_kantorovich(std::vector<Vec2> sources, std::vector<double> source_mass,
                                std::vector<Vec2> targets, std::vector<double> target_mass,
                                const Norm& norm, const SolverOptions& options) {
    check_balance(source_mass, target_mass);
    const CostMatrix cost(sources, targets, norm);
    TransportSolution sol = solve_transportation(source_mass, target_mass, cost, options);
    TransportPlan plan;
    plan.sources = std::move(sources);
    plan.targets = std::move(targets);
    plan.source_mass = std::move(source_mass);
    plan.target_mass = std::move(target_mass);
    plan.entries = std::move(sol.entries);
    plan.degenerate = std::move(sol.degenerate);
    plan.norm = norm;
    plan.cost = sol.cost;
    plan.stats = sol.stats;
    return plan;
}

TransportPlan solve_kantorovich(const Domain& domain, const Norm& norm,
                                const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus,
                                const SolverOptions& options) {
    TransportPlan plan = solve_kantorovich(f_plus.points(domain), f_plus.masses(),
                                           f_minus.points(domain), f_minus.masses(), norm, options);
    for (const auto& a : f_plus.atoms()) plan.source_s.push_back(a.s);
    for (const auto& a : f_minus.atoms()) plan.target_s.push_back(a.s);
    return plan;
}

TransportPlan brute_force_plan(const Domain& domain, const Norm& norm,
                               const BoundaryMeasure& f_plus, const BoundaryMeasure& f_minus) {
    const std::size_t n = f_plus.size();
    if (n == 0 || n != f_minus.size()) {
        throw SchemaError("brute_force_plan needs equally many source and target atoms");
    }
    if (n > 8) throw SchemaError("brute_force_plan is limited to n <= 8");
    const double mass = f_plus.atoms().front().mass;
    for (const auto& a : f_plus.atoms()) {
        if (std::abs(a.mass - mass) > 1e-12 * mass) throw SchemaError("brute_force_plan needs equal masses");
    }
    for (const auto& a : f_minus.atoms()) {
        if (std::abs(a.mass - mass) > 1e-12 * mass) throw SchemaError("brute_force_plan needs equal masses");
    }
    TransportPlan plan;
    plan.sources = f_plus.points(domain);
    plan.targets = f_minus.points(domain);
    plan.source_mass = f_plus.masses();
    plan.target_mass = f_minus.masses();
    for (const auto& a : f_plus.atoms()) plan.source_s.push_back(a.s);
    for (const auto& a : f_minus.atoms()) plan.target_s.push_back(a.s);
    plan.norm = norm;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += plan.pair_cost(static_cast<int>(i), perm[i]);
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    plan.cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        plan.entries.push_back({static_cast<int>(i), best[i], mass});
        plan.cost += mass * plan.pair_cost(static_cast<int>(i), best[i]);
    }
    return plan;
}

DualPotentials dual_potentials(const TransportPlan& plan) {
    const int n = static_cast<int>(plan.sources.size());
    const int m = static_cast<int>(plan.targets.size());
    std::vector<std::vector<int>> adj(n + m);
    auto add = [&](int i, int j) {
        adj[i].push_back(n + j);
        adj[n + j].push_back(i);
    };
    for (const auto& e : plan.entries) add(e.i, e.j);
    for (const auto& d : plan.degenerate) add(d.i, d.j);

    DualPotentials pots;
    pots.phi_source.assign(n, 0.0);
    pots.phi_target.assign(m, 0.0);
    std::vector<double> pot(n + m, 0.0);
    std::vector<char> seen(n + m, 0);
    std::vector<int> queue;
    // Targets first so that each component is anchored at its lowest target.
    std::vector<int> anchors;
    for (int j = 0; j < m; ++j) anchors.push_back(n + j);
    for (int i = 0; i < n; ++i) anchors.push_back(i);
    for (int start : anchors) {
        if (seen[start]) continue;
        ++pots.components;
        seen[start] = 1;
        pot[start] = 0.0;
        queue.assign(1, start);
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const int v = queue[h];
            for (int w : adj[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                if (w < n) {
                    pot[w] = pot[v] + plan.pair_cost(w, v - n);
                } else {
                    pot[w] = pot[v] - plan.pair_cost(v, w - n);
                }
                queue.push_back(w);
            }
        }
    }
    std::copy(pot.begin(), pot.begin() + n, pots.phi_source.begin());
    std::copy(pot.begin() + n, pot.end(), pots.phi_target.begin());
    return pots;
}

double duality_gap(const TransportPlan& plan, const DualPotentials& potentials) {
    double dual = 0.0;
    for (std::size_t i = 0; i < plan.source_mass.size(); ++i) {
        dual += potentials.phi_source[i] * plan.source_mass[i];
    }
    for (std::size_t j = 0; j < plan.target_mass.size(); ++j) {
        dual -= potentials.phi_target[j] * plan.target_mass[j];
    }
    return plan.cost - dual;
}

double max_dual_violation(const TransportPlan& plan, const DualPotentials& potentials,
                          long sample_pairs, std::uint64_t seed) {
    const int n = static_cast<int>(plan.sources.size());
    const int m = static_cast<int>(plan.targets.size());
    double worst = -std::numeric_limits<double>::infinity();
    auto check = [&](int i, int j) {
        worst = std::max(worst, potentials.phi_source[i] - potentials.phi_target[j] -
                                    plan.pair_cost(i, j));
    };
    if (sample_pairs <= 0) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) check(i, j);
        }
    } else {
        Rng rng(seed);
        for (long k = 0; k < sample_pairs; ++k) check(rng.integer(0, n - 1), rng.integer(0, m - 1));
        for (const auto& e : plan.entries) check(e.i, e.j);
    }
    return worst;
}

std::vector<std::pair<std::size_t, std::size_t>> check_noncrossing(const TransportPlan& plan,
                                                                   double tol) {
    struct Seg {
        Vec2 a, d;
        Vec2 lo, hi;
    };
    std::vector<Seg> segs;
    segs.reserve(plan.entries.size());
    for (const auto& e : plan.entries) {
        const Vec2 a = plan.sources[e.i], b = plan.targets[e.j];
        segs.push_back({a, b - a, {std::min(a.x, b.x), std::min(a.y, b.y)},
                        {std::max(a.x, b.x), std::max(a.y, b.y)}});
    }
    std::vector<std::pair<std::size_t, std::size_t>> bad;
    for (std::size_t p = 0; p < segs.size(); ++p) {
        for (std::size_t q = p + 1; q < segs.size(); ++q) {
            const Seg& s = segs[p];
            const Seg& t = segs[q];
            if (s.hi.x < t.lo.x || t.hi.x < s.lo.x || s.hi.y < t.lo.y || t.hi.y < s.lo.y) continue;
            const double denom = cross(s.d, t.d);
            const double scale = length(s.d) * length(t.d);
            if (std::abs(denom) <= 1e-14 * scale) continue;  // parallel chords
            const Vec2 w = t.a - s.a;
            const double u = cross(w, t.d) / denom;  // along s
            const double v = cross(w, s.d) / denom;  // along t
            if (u > tol && u < 1.0 - tol && v > tol && v < 1.0 - tol) bad.emplace_back(p, q);
        }
    }
    return bad;
}

Displacements displacement_lengths(const TransportPlan& plan) {
    const std::size_t n = plan.sources.size();
    Displacements out;
    out.length.assign(n, 0.0);
    out.multiplicity.assign(n, 0);
    std::vector<double> mass(n, 0.0);
    for (const auto& e : plan.entries) {
        out.length[e.i] += e.mass * length(plan.targets[e.j] - plan.sources[e.i]);
        mass[e.i] += e.mass;
        ++out.multiplicity[e.i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (mass[i] > 0.0) out.length[i] /= mass[i];
        if (out.multiplicity[i] > 1) out.any_split = true;
    }
    return out;
}

TransportPlan reversed(const TransportPlan& plan) {
    TransportPlan r;
    r.sources = plan.targets;
    r.targets = plan.sources;
    r.source_mass = plan.target_mass;
    r.target_mass = plan.source_mass;
    r.source_s = plan.target_s;
    r.target_s = plan.source_s;
    for (const auto& e : plan.entries) r.entries.push_back({e.j, e.i, e.mass});
    for (const auto& d : plan.degenerate) r.degenerate.push_back({d.j, d.i});
    auto by_cell = [](const auto& l, const auto& rr) { return l.i != rr.i ? l.i < rr.i : l.j < rr.j; };
    std::sort(r.entries.begin(), r.entries.end(), by_cell);
    std::sort(r.degenerate.begin(), r.degenerate.end(), by_cell);
    r.norm = plan.norm;
    r.cost = plan.cost;
    r.stats = plan.stats;
    return r;
}

}  // namespace lgt
