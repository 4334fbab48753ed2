#pragma once

#include <cstdint>
#include <vector>

namespace datasim {

// Discrete optimal transport between two weighted supports. Marginals are
// integer masses (counts); the plan is normalized to probabilities.
struct TransportResult {
    double cost = 0.0;                  // sum pi_ij c_ij of the returned plan
    std::vector<double> plan;           // row-major m x n, sums to 1
    bool converged = true;              // always true for the exact solver
    int iterations = 0;
    std::vector<double> cost_trace;     // per-iteration plan cost (Sinkhorn)
    double marginal_violation = 0.0;
};

// Exact solution by successive shortest augmenting paths with potentials.
// Supplies are scaled to a common integer grid so all capacity logic is
// integral; costs must be nonnegative.
TransportResult exact_transport(const std::vector<std::int64_t>& a,
                                const std::vector<std::int64_t>& b,
                                const std::vector<double>& cost);

// Entropic regularization with epsilon = eps_scale * mean(cost), log-domain
// iterations. converged=false when the marginal tolerance is not reached.
TransportResult sinkhorn_transport(const std::vector<std::int64_t>& a,
                                   const std::vector<std::int64_t>& b,
                                   const std::vector<double>& cost, double eps_scale = 0.01,
                                   int max_iterations = 5000, double marginal_tol = 1e-6,
                                   bool record_trace = false);

} // namespace datasim
