#pragma once

#include "datasim/cart.hpp"
#include "datasim/dataset.hpp"

#include <cstdint>
#include <vector>

namespace datasim {

enum class C2stClassifier { Knn, Mlp };

inline constexpr double kDefaultSplitFraction = 0.7;

// Classifier two-sample (or k-sample) test: held-out accuracy of a
// classifier trained to tell the samples apart.
SimilarityOutcome c2st(const PooledSample& pooled, C2stClassifier classifier,
                       double split_fraction, std::uint64_t seed);

enum class OobMode { Overall, PerClass };

SimilarityOutcome hmn(const PooledSample& pooled, OobMode mode, int trees, std::uint64_t seed);

// Held-out classification-tree test: test error as the statistic.
SimilarityOutcome ymrzl(const PooledSample& pooled, double split_fraction, std::uint64_t seed);

// Out-of-bag bookkeeping of the random forest behind hmn.
struct ForestOob {
    double overall_error = 0.0;
    std::vector<double> per_class_error;
    std::size_t rows_with_votes = 0;
    std::size_t rows_total = 0;
};

ForestOob forest_oob(const std::vector<double>& x, std::size_t n, std::size_t d,
                     const std::vector<int>& y, int num_classes, int trees, std::uint64_t seed);

// KNN classifier over dummy-coded rows; k tuned over {1,3,5,9,...} by
// cross-validation on the training split.
struct KnnModel {
    std::vector<double> x;
    std::vector<int> y;
    std::size_t n = 0, d = 0;
    int num_classes = 2;
    int k = 1;

    int predict(const double* row) const;
};

KnnModel fit_knn(const std::vector<double>& x, std::size_t n, std::size_t d,
                 const std::vector<int>& y, int num_classes, std::uint64_t seed);

// One-hidden-layer logistic MLP trained by seeded minibatch SGD.
struct MlpModel {
    std::size_t d = 0;
    int num_classes = 2;
    int hidden = 20;
    std::vector<double> w1, b1, w2, b2;

    int predict(const double* row) const;
};

struct MlpParams {
    int hidden = 20;
    int epochs = 200;
    double learning_rate = 0.1;
    int batch = 16;
};

MlpModel fit_mlp(const std::vector<double>& x, std::size_t n, std::size_t d,
                 const std::vector<int>& y, int num_classes, const MlpParams& params,
                 std::uint64_t seed);

// Seeded stratified train/test split over classes 0..k-1; preserves each
// class share up to one row.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
Split stratified_split(const std::vector<int>& cls, double train_fraction, std::uint64_t seed);

} // namespace datasim
