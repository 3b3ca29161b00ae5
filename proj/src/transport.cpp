#include "amreval/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amreval/errors.hpp"

namespace amreval {
namespace {

constexpr double kMassTol = 1e-9;
constexpr double kReducedCostTol = 1e-12;

void validate(const TransportProblem& p, std::size_t cap) {
    std::size_t n = p.source_mass.size();
    std::size_t m = p.target_mass.size();
    if (n == 0 || m == 0) throw UsageError("transport: empty point set");
    if (n > cap || m > cap) throw UsageError("transport: instance exceeds size cap");
    if (p.cost.size() != n) throw UsageError("transport: cost rows != source size");
    double sa = 0.0, sb = 0.0;
    for (double v : p.source_mass) {
        if (v < 0.0) throw UsageError("transport: negative source mass");
        sa += v;
    }
    for (double v : p.target_mass) {
        if (v < 0.0) throw UsageError("transport: negative target mass");
        sb += v;
    }
    if (std::abs(sa - 1.0) > kMassTol || std::abs(sb - 1.0) > kMassTol)
        throw UsageError("transport: masses must each sum to 1");
    for (const auto& row : p.cost) {
        if (row.size() != m) throw UsageError("transport: cost columns != target size");
        for (double c : row) {
            if (!std::isfinite(c)) throw UsageError("transport: non-finite cost");
            if (c < 0.0) throw UsageError("transport: negative cost");
        }
    }
}

// Basic cell of the transportation simplex tableau.
struct Basic {
    std::size_t row, col;
    double flow;
};

class Simplex {
public:
    Simplex(const TransportProblem& p)
        : cost_(p.cost), n_(p.source_mass.size()), m_(p.target_mass.size()) {
        northwest_corner(p.source_mass, p.target_mass);
    }

    TransportPlan run() {
        // Most-negative pivoting with a deterministic tie-break; switch to
        // Bland's rule if degeneracy ever makes it stall.
        std::size_t cap = 100 * (n_ + m_) * (n_ + m_) + 1000;
        bool bland = false;
        for (std::size_t iter = 0;; ++iter) {
            if (iter >= cap) bland = true;
            compute_potentials();
            std::size_t er = 0, ec = 0;
            if (!pick_entering(bland, er, ec)) break;
            pivot(er, ec);
        }
        TransportPlan plan;
        plan.flow.assign(n_, std::vector<double>(m_, 0.0));
        for (const Basic& b : basis_)
            plan.flow[b.row][b.col] = std::max(0.0, b.flow);
        plan.objective = 0.0;
        for (const Basic& b : basis_)
            if (b.flow > 0.0) plan.objective += b.flow * cost_[b.row][b.col];
        return plan;
    }

private:
    void northwest_corner(std::vector<double> a, std::vector<double> b) {
        std::size_t i = 0, j = 0;
        while (true) {
            double f = std::min(a[i], b[j]);
            basis_.push_back({i, j, f});
            a[i] -= f;
            b[j] -= f;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (i < n_ - 1 && (a[i] <= b[j] || j == m_ - 1))
                ++i;
            else
                ++j;
        }
    }

    void compute_potentials() {
        u_.assign(n_, 0.0);
        v_.assign(m_, 0.0);
        std::vector<char> udone(n_, 0), vdone(m_, 0);
        // Adjacency of the basis tree over rows (0..n-1) and cols (n..n+m-1).
        std::vector<std::vector<std::size_t>> by_row(n_), by_col(m_);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            by_row[basis_[k].row].push_back(k);
            by_col[basis_[k].col].push_back(k);
        }
        udone[0] = 1;
        // BFS over tree vertices: (is_row, index) pairs, u_[0] anchored at 0.
        std::vector<std::pair<char, std::size_t>> queue{{1, 0}};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            auto [row_side, idx] = queue[q];
            if (row_side) {
                for (std::size_t k : by_row[idx]) {
                    std::size_t c = basis_[k].col;
                    if (!vdone[c]) {
                        v_[c] = cost_[idx][c] - u_[idx];
                        vdone[c] = 1;
                        queue.push_back({0, c});
                    }
                }
            } else {
                for (std::size_t k : by_col[idx]) {
                    std::size_t r = basis_[k].row;
                    if (!udone[r]) {
                        u_[r] = cost_[r][idx] - v_[idx];
                        udone[r] = 1;
                        queue.push_back({1, r});
                    }
                }
            }
        }
        for (std::size_t r = 0; r < n_; ++r)
            if (!udone[r]) throw InternalError("transport: basis is not a spanning tree");
        for (std::size_t c = 0; c < m_; ++c)
            if (!vdone[c]) throw InternalError("transport: basis is not a spanning tree");
    }

    bool pick_entering(bool bland, std::size_t& er, std::size_t& ec) const {
        double best = -kReducedCostTol;
        bool found = false;
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < m_; ++c) {
                double red = cost_[r][c] - u_[r] - v_[c];
                if (red < -kReducedCostTol) {
                    if (bland) {
                        er = r;
                        ec = c;
                        return true;
                    }
                    if (red < best) {
                        best = red;
                        er = r;
                        ec = c;
                        found = true;
                    }
                }
            }
        }
        return found;
    }

    // Finds the unique cycle the entering cell closes in the basis tree and
    // shifts flow around it.
    void pivot(std::size_t er, std::size_t ec) {
        // Path in the tree from row er to col ec; vertices: rows then cols.
        std::size_t nv = n_ + m_;
        std::vector<int> parent_edge(nv, -1);
        std::vector<std::size_t> parent_vertex(nv, SIZE_MAX);
        std::vector<char> seen(nv, 0);
        std::vector<std::size_t> queue{er};
        seen[er] = 1;
        for (std::size_t q = 0; q < queue.size() && !seen[n_ + ec]; ++q) {
            std::size_t vtx = queue[q];
            for (std::size_t k = 0; k < basis_.size(); ++k) {
                std::size_t a = basis_[k].row;
                std::size_t b = n_ + basis_[k].col;
                std::size_t other;
                if (a == vtx)
                    other = b;
                else if (b == vtx)
                    other = a;
                else
                    continue;
                if (!seen[other]) {
                    seen[other] = 1;
                    parent_edge[other] = static_cast<int>(k);
                    parent_vertex[other] = vtx;
                    queue.push_back(other);
                }
            }
        }
        if (!seen[n_ + ec]) throw InternalError("transport: entering cell closes no cycle");

        // Walk back col ec -> row er; cells alternate -, +, -, ... starting
        // with - for the first basis cell adjacent to the entering one.
        std::vector<std::size_t> cycle;  // basis indices along the path
        for (std::size_t vtx = n_ + ec; vtx != er; vtx = parent_vertex[vtx])
            cycle.push_back(static_cast<std::size_t>(parent_edge[vtx]));
        // cycle[0] shares column ec with the entering cell, so it takes -theta;
        // signs alternate from there. The leaving cell is the minus-position
        // with the least flow, ties broken by (row, col) so pivoting cannot
        // cycle under the Bland fallback.
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leaving = SIZE_MAX;
        for (std::size_t idx = 0; idx < cycle.size(); idx += 2) {
            const Basic& b = basis_[cycle[idx]];
            bool better = b.flow < theta;
            if (!better && leaving != SIZE_MAX && b.flow == theta) {
                const Basic& cur = basis_[leaving];
                better = b.row < cur.row || (b.row == cur.row && b.col < cur.col);
            }
            if (better) {
                theta = b.flow;
                leaving = cycle[idx];
            }
        }
        if (leaving == SIZE_MAX) throw InternalError("transport: no leaving cell");
        for (std::size_t idx = 0; idx < cycle.size(); ++idx) {
            if (idx % 2 == 0)
                basis_[cycle[idx]].flow -= theta;
            else
                basis_[cycle[idx]].flow += theta;
        }
        basis_[leaving] = {er, ec, theta};
        // Clamp tiny negatives from float drift.
        for (Basic& b : basis_)
            if (b.flow < 0.0 && b.flow > -1e-12) b.flow = 0.0;
    }

    const std::vector<std::vector<double>>& cost_;
    std::size_t n_, m_;
    std::vector<Basic> basis_;
    std::vector<double> u_, v_;
};

}  // namespace

TransportPlan solve_exact(const TransportProblem& p, std::size_t cap) {
    validate(p, cap);
    return Simplex(p).run();
}

double wasserstein_distance(const std::vector<std::vector<double>>& points_a,
                            const std::vector<std::vector<double>>& points_b) {
    if (points_a.empty() || points_b.empty())
        throw UsageError("wasserstein: empty point set");
    std::size_t dim = points_a[0].size();
    for (const auto& v : points_a)
        if (v.size() != dim) throw UsageError("wasserstein: dimension mismatch");
    for (const auto& v : points_b)
        if (v.size() != dim) throw UsageError("wasserstein: dimension mismatch");
    std::vector<std::vector<double>> cost(points_a.size(),
                                          std::vector<double>(points_b.size(), 0.0));
    for (std::size_t i = 0; i < points_a.size(); ++i)
        for (std::size_t j = 0; j < points_b.size(); ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                double diff = points_a[i][d] - points_b[j][d];
                sq += diff * diff;
            }
            cost[i][j] = std::sqrt(sq);
        }
    return wasserstein_from_cost(cost);
}

double wasserstein_from_cost(const std::vector<std::vector<double>>& cost) {
    if (cost.empty() || cost[0].empty()) throw UsageError("wasserstein: empty cost");
    TransportProblem p;
    p.cost = cost;
    p.source_mass.assign(cost.size(), 1.0 / static_cast<double>(cost.size()));
    p.target_mass.assign(cost[0].size(), 1.0 / static_cast<double>(cost[0].size()));
    return solve_exact(p).objective;
}

}  // namespace amreval
