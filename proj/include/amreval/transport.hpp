#pragma once

#include <cstddef>
#include <vector>

namespace amreval {

// Discrete Monge-Kantorovich instance. Masses on each side must sum to 1
// within 1e-9; costs must be finite and nonnegative.
struct TransportProblem {
    std::vector<std::vector<double>> cost;  // n x m
    std::vector<double> source_mass;        // n
    std::vector<double> target_mass;        // m
};

struct TransportPlan {
    std::vector<std::vector<double>> flow;  // n x m, nonnegative
    double objective = 0.0;
};

inline constexpr std::size_t kDefaultTransportCap = 512;

// Exact solver (transportation simplex). The objective is unique even when
// the optimal plan is not. Throws UsageError on invalid input or when a
// side exceeds the cap.
TransportPlan solve_exact(const TransportProblem& p,
                          std::size_t cap = kDefaultTransportCap);

// 1-Wasserstein distance between two point clouds under the Euclidean
// ground metric with uniform masses.
double wasserstein_distance(const std::vector<std::vector<double>>& points_a,
                            const std::vector<std::vector<double>>& points_b);

// Same, from a precomputed cost matrix with uniform masses (used by the
// kernel metrics, whose costs come from the expected-distance model).
double wasserstein_from_cost(const std::vector<std::vector<double>>& cost);

}  // namespace amreval
