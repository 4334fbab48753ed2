#pragma once

#include "datasim/dataset.hpp"

#include <vector>

namespace datasim {

enum class Metric { Hamming, EuclideanDummy };

// Dense symmetric distance matrix with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, Metric metric) : n_(n), metric_(metric), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    Metric metric() const { return metric_; }
    double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    Metric metric_ = Metric::Hamming;
    std::vector<double> d_;
};

// Number of coordinates where two rows differ.
int hamming(const Code* a, const Code* b, std::size_t p);
int hamming(const CategoricalDataset& d, std::size_t i, std::size_t j);

// Reference-category dummy coding: column j contributes arities[j]-1
// indicator columns, code 0 is the reference.
std::vector<double> dummy_encode(const CategoricalDataset& d);

double row_distance(const CategoricalDataset& d, std::size_t i, std::size_t j, Metric metric);

DistanceMatrix distance_matrix(const PooledSample& pooled, Metric metric);
DistanceMatrix distance_matrix(const CategoricalDataset& data, Metric metric);

} // namespace datasim
