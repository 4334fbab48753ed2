#pragma once

#include "datasim/distance.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace datasim {

struct MatchPolicy {
    bool permuted = false;
    std::uint64_t seed = 0;

    static MatchPolicy deterministic() { return MatchPolicy{false, 0}; }
    static MatchPolicy permuted_with(std::uint64_t seed) { return MatchPolicy{true, seed}; }
};

// Exact minimum-weight perfect matching of the pooled observations. Odd N is
// handled by a phantom node at distance max(D)+1 to every real node; the
// phantom's partner is reported and its pair excluded from cross counts.
struct Matching {
    std::vector<std::pair<int, int>> pairs;  // real-node pairs, u < v, sorted
    double total_weight = 0.0;               // over real pairs only
    int phantom_partner = -1;                // real node matched to the phantom
    bool permuted = false;

    // Final dual certificate pieces (on the internal maximization form).
    std::vector<double> duals;
    std::vector<std::vector<int>> blossoms;  // real-node sets of live blossoms
    std::vector<double> blossom_duals;
    double dual_gap = 0.0;                   // primal minus dual objective
};

Matching min_weight_matching(const DistanceMatrix& D, MatchPolicy policy = MatchPolicy::deterministic());

// Max over all edges of the dual-feasibility violation plus complementary
// slackness residual; near zero certifies optimality.
double matching_certificate_violation(const DistanceMatrix& D, const Matching& m);

} // namespace datasim
