#pragma once

#include "datasim/cart.hpp"
#include "datasim/dataset.hpp"

#include <cstdint>
#include <vector>

namespace datasim {

enum class GgrlDiff { Absolute, Scaled };  // f_a, f_s
enum class GgrlAgg { Sum, Max };

// Greatest common refinement of two leaf partitions: the nonempty pairwise
// intersections of the trees' boxes. Patterns are per-feature constraints
// (-1 free / 0 / 1) as produced by CartTree::leaf_patterns.
struct GcrBox {
    int leaf_a;
    int leaf_b;
};

std::vector<GcrBox> greatest_common_refinement(const std::vector<std::vector<int>>& patterns_a,
                                               const std::vector<std::vector<int>>& patterns_b);

// Statistic g(f(p, q)) over box proportions of the two datasets.
double ggrl_value(const std::vector<double>& p, const std::vector<double>& q, GgrlDiff f, GgrlAgg g);

SimilarityOutcome ggrl(const CategoricalDataset& d1, const CategoricalDataset& d2,
                       GgrlDiff f = GgrlDiff::Absolute, GgrlAgg g = GgrlAgg::Sum,
                       bool tune = false, std::uint64_t seed = 0);

} // namespace datasim
