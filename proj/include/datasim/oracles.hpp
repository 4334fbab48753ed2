#pragma once

#include "datasim/distance.hpp"
#include "datasim/simgraph.hpp"

#include <map>
#include <utility>
#include <vector>

namespace datasim {
namespace oracles {

// Enumeration budgets; exceeding one is a test-configuration error.
inline constexpr std::size_t kMaxPermutationNodes = 8;
inline constexpr std::size_t kMaxMatchingNodes = 10;
inline constexpr std::size_t kMaxGraphNodes = 7;
inline constexpr std::size_t kMaxTransportSupport = 4;

// Exact permutation moments of the weighted edge counts (R, R1, R2) over
// all label assignments of a fixed graph.
struct EdgeCountMoments {
    double e_r = 0, e_r1 = 0, e_r2 = 0;
    double var_r = 0, var_r1 = 0, var_r2 = 0, cov_r12 = 0;
};
EdgeCountMoments permutation_edge_moments(const std::vector<WeightedEdge>& edges,
                                          std::size_t n1, std::size_t n2);

// Exact permutation mean/covariance of the cross-count vector over all
// label assignments of a fixed perfect matching with N/2 pairs.
struct CrossMomentsOracle {
    std::vector<double> mean;
    std::vector<double> cov;  // row-major over cross indices
};
CrossMomentsOracle permutation_cross_moments(const std::vector<std::size_t>& sizes);

// Minimum-weight perfect matching by exhaustive pairing (N <= 10, even).
struct BruteMatching {
    double weight = 0.0;
    std::vector<std::pair<int, int>> pairs;
};
BruteMatching brute_force_matching(const DistanceMatrix& D);

// All optimal graphs of the given spec, enumerated at the observation level
// (value selections x within-class spanning trees x representative pairs for
// NN; all minimum spanning trees for 1-MST). Frequencies are per edge.
struct OptimalGraphFamily {
    std::vector<std::vector<std::pair<int, int>>> graphs;
    std::map<std::pair<int, int>, double> edge_frequency;
    std::vector<std::pair<int, int>> union_edges;
};
OptimalGraphFamily enumerate_optimal_knn_graphs(const DistanceMatrix& D, int k);
OptimalGraphFamily enumerate_optimal_mst_graphs(const DistanceMatrix& D);

// Exact transport optimum by basis (spanning-tree) enumeration on the
// bipartite support graph; supports up to kMaxTransportSupport.
double transport_vertex_optimum(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<double>& cost);

// Runs the whole oracle cross-check suite on small random inputs; returns
// a human-readable report and sets ok=false on any disagreement.
struct VerifyReport {
    bool ok = true;
    std::vector<std::string> lines;
};
VerifyReport run_verification(std::uint64_t seed);

} // namespace oracles
} // namespace datasim
