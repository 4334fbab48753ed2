#pragma once

#include "datasim/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace datasim {

// Classification tree with axis-aligned splits on binary (dummy-coded)
// features, Gini impurity, deterministic tie-breaking by feature index.
struct CartParams {
    int max_depth = 8;
    int min_leaf = 5;
    int mtry = 0;  // 0 = consider all features; otherwise sample per node
};

class CartTree {
public:
    // x: n rows by d columns, row-major, entries 0/1. y in [0, num_classes).
    // rows: optional training subset (with repetitions for bootstrap).
    static CartTree fit(const std::vector<double>& x, std::size_t n, std::size_t d,
                        const std::vector<int>& y, int num_classes, const CartParams& params,
                        Rng* rng = nullptr, const std::vector<std::size_t>* rows = nullptr);

    int predict(const double* row) const;
    int leaf_of(const double* row) const;
    std::size_t leaf_count() const { return leaf_total_; }
    int depth() const;

    // Per leaf, a constraint per feature: -1 free, 0 requires value 0,
    // 1 requires value 1. Two boxes from different trees intersect iff their
    // constraints never conflict.
    std::vector<std::vector<int>> leaf_patterns() const;

    std::size_t feature_count() const { return d_; }

private:
    struct Node {
        int feature = -1;
        int left = -1;
        int right = -1;
        int leaf_id = -1;
        int majority = 0;
    };
    std::vector<Node> nodes_;
    std::size_t leaf_total_ = 0;
    std::size_t d_ = 0;

    friend class CartBuilder;
};

// Cross-validated grid over depth x min-leaf, 5 folds; returns the best
// parameters by CV accuracy (ties resolve to the earlier grid entry).
CartParams tune_cart(const std::vector<double>& x, std::size_t n, std::size_t d,
                     const std::vector<int>& y, int num_classes, std::uint64_t seed);

} // namespace datasim
