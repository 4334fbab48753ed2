#pragma once

#include "datasim/dataset.hpp"
#include "datasim/transport.hpp"

#include <cstdint>
#include <vector>

namespace datasim {

enum class OtddMode { Exact, Sinkhorn };

struct OtddParams {
    OtddMode mode = OtddMode::Exact;
    double sinkhorn_eps = 0.01;
    double q = 1.0;       // outer exponent
    double qprime = 1.0;  // inner / point-distance exponent
};

// Empirical distribution over distinct covariate rows for one label value.
struct LabelConditional {
    std::vector<std::vector<Code>> support;
    std::vector<std::int64_t> counts;
};

// Builds the label conditional from all rows of the given datasets carrying
// label y (the pooled pair, so identical labels share one distribution).
LabelConditional label_conditional(const std::vector<const CategoricalDataset*>& datasets, Code y);

// q'-Wasserstein distance under Hamming^q' ground cost, exact LP.
double inner_wasserstein(const LabelConditional& a, const LabelConditional& b, double qprime);

SimilarityOutcome otdd(const CategoricalDataset& d1, const CategoricalDataset& d2,
                       const OtddParams& params = {});

} // namespace datasim
