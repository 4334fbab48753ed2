#pragma once

#include "datasim/dataset.hpp"
#include "datasim/distance.hpp"
#include "datasim/matching.hpp"

#include <vector>

namespace datasim {

// Pair tabulation of a matching by sample membership: within[i] counts pairs
// inside sample i+1, cross(i,j) pairs straddling samples i+1 and j+1.
struct CrossCounts {
    std::size_t k = 0;
    std::vector<double> within;
    std::vector<double> cross;  // upper triangle, index via cross_index

    static std::size_t cross_index(std::size_t k, std::size_t i, std::size_t j);
    double cross_at(std::size_t i, std::size_t j) const;
    double total_cross() const;
    double total_pairs() const;
};

CrossCounts cross_counts(const Matching& m, const std::vector<int>& membership);

// Expectation and covariance of the cross-count vector (all k(k-1)/2 pairs)
// under random labeling of a fixed perfect matching on N nodes.
struct CrossMoments {
    std::size_t k = 0;
    std::size_t pairs = 0;  // N/2 (real pairs in the matching)
    std::vector<double> mean;
    std::vector<double> cov;  // row-major pairs x pairs over cross indices
};

CrossMoments crossmatch_null_moments(const std::vector<std::size_t>& sizes);

SimilarityOutcome petrie_statistic(const PooledSample& pooled, Metric metric = Metric::EuclideanDummy,
                                   MatchPolicy policy = MatchPolicy::deterministic());
SimilarityOutcome mmcm_statistic(const PooledSample& pooled, Metric metric = Metric::EuclideanDummy,
                                 MatchPolicy policy = MatchPolicy::deterministic());

// Variants on a precomputed matching (lets callers share the expensive part).
SimilarityOutcome petrie_statistic(const Matching& m, const std::vector<int>& membership,
                                   const std::vector<std::size_t>& sizes, std::size_t distinct_values);
SimilarityOutcome mmcm_statistic(const Matching& m, const std::vector<int>& membership,
                                 const std::vector<std::size_t>& sizes, std::size_t distinct_values);

std::size_t count_distinct_rows(const CategoricalDataset& d);

} // namespace datasim
