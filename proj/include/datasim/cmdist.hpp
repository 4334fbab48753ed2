#pragma once

#include "datasim/dataset.hpp"

#include <vector>

namespace datasim {

enum class CovMode { Enumerate, ClosedForm };

// Independent-means feature frequencies: column means of the dummy encoding.
struct FeatureFrequencies {
    std::vector<double> theta;
    std::size_t m = 0;
};

FeatureFrequencies feature_frequencies(const CategoricalDataset& d);

// Covariance of the indicator feature vector under the uniform distribution
// on the whole sample space. Enumerate walks all prod(arities) states and is
// refused beyond the feasibility cap; ClosedForm uses the per-column blocks
// diag(pi) - pi pi^T with pi = 1/arity.
struct FeatureCovariance {
    std::size_t m = 0;
    std::vector<double> cov;  // row-major m x m
    bool feasible = true;
    std::string reason;
};

inline constexpr double kEnumerationCap = 16777216.0;  // 2^24 states

FeatureCovariance feature_covariance(const std::vector<Code>& arities, CovMode mode);

SimilarityOutcome cm_distance(const CategoricalDataset& d1, const CategoricalDataset& d2,
                              CovMode mode = CovMode::ClosedForm);

} // namespace datasim
