#include "datasim/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace datasim {

int hamming(const Code* a, const Code* b, std::size_t p) {
    int h = 0;
    for (std::size_t j = 0; j < p; ++j) {
        h += (a[j] != b[j]) ? 1 : 0;
    }
    return h;
}

int hamming(const CategoricalDataset& d, std::size_t i, std::size_t j) {
    return hamming(d.row(i), d.row(j), d.cols());
}

std::vector<double> dummy_encode(const CategoricalDataset& d) {
    const std::size_t n = d.rows();
    const std::size_t p = d.cols();
    const std::size_t w = d.dummy_width();
    std::vector<double> out(n * w, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < p; ++j) {
            const Code c = d.at(i, j);
            if (c > 0) {
                out[i * w + off + static_cast<std::size_t>(c - 1)] = 1.0;
            }
            off += static_cast<std::size_t>(d.arities()[j] - 1);
        }
    }
    return out;
}

double row_distance(const CategoricalDataset& d, std::size_t i, std::size_t j, Metric metric) {
    // Dummy-coded Euclidean distance without materializing the encoding:
    // two equal codes contribute 0; differing codes contribute 1 when one of
    // them is the reference (one indicator flips) and 2 otherwise.
    if (metric == Metric::Hamming) {
        return static_cast<double>(hamming(d, i, j));
    }
    double sq = 0.0;
    for (std::size_t c = 0; c < d.cols(); ++c) {
        const Code a = d.at(i, c);
        const Code b = d.at(j, c);
        if (a == b) continue;
        sq += (a == 0 || b == 0) ? 1.0 : 2.0;
    }
    return std::sqrt(sq);
}

DistanceMatrix distance_matrix(const CategoricalDataset& data, Metric metric) {
    const std::size_t n = data.rows();
    DistanceMatrix m(n, metric);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            m.set(i, j, row_distance(data, i, j, metric));
        }
    }
    return m;
}

DistanceMatrix distance_matrix(const PooledSample& pooled, Metric metric) {
    return distance_matrix(pooled.data, metric);
}

} // namespace datasim
