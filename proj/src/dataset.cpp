#include "datasim/dataset.hpp"

#include <limits>

namespace datasim {

CategoricalDataset::CategoricalDataset(std::vector<Code> values, std::size_t n, std::size_t p,
                                       std::vector<Code> arities,
                                       std::optional<std::vector<Code>> target)
    : values_(std::move(values)), n_(n), p_(p), arities_(std::move(arities)),
      target_(std::move(target)) {
    if (n_ < 1 || p_ < 1) {
        throw std::invalid_argument("dataset must have n >= 1 and p >= 1");
    }
    if (values_.size() != n_ * p_) {
        throw std::invalid_argument("value buffer size does not match n*p");
    }
    if (arities_.size() != p_) {
        throw std::invalid_argument("arities length does not match p");
    }
    for (std::size_t j = 0; j < p_; ++j) {
        if (arities_[j] < 2) {
            throw std::invalid_argument("arity<2 in column " + std::to_string(j));
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < p_; ++j) {
            const Code c = values_[i * p_ + j];
            if (c < 0 || c >= arities_[j]) {
                throw std::invalid_argument("code out of range in column " + std::to_string(j));
            }
        }
    }
    if (target_) {
        if (target_->size() != n_) {
            throw std::invalid_argument("target length does not match n");
        }
        for (Code t : *target_) {
            if (t != 0 && t != 1) {
                throw std::invalid_argument("target must be binary 0/1");
            }
        }
    }
}

CategoricalDataset CategoricalDataset::without_target() const {
    return CategoricalDataset(values_, n_, p_, arities_);
}

CategoricalDataset CategoricalDataset::with_target(std::vector<Code> target) const {
    return CategoricalDataset(values_, n_, p_, arities_, std::move(target));
}

std::size_t CategoricalDataset::dummy_width() const {
    std::size_t w = 0;
    for (Code a : arities_) {
        w += static_cast<std::size_t>(a - 1);
    }
    return w;
}

PooledSample pool(const std::vector<CategoricalDataset>& datasets) {
    if (datasets.size() < 2) {
        throw std::invalid_argument("pool requires at least 2 datasets");
    }
    const auto& first = datasets.front();
    for (const auto& d : datasets) {
        if (d.has_target()) {
            throw std::invalid_argument("pool requires datasets without targets");
        }
        if (d.cols() != first.cols() || d.arities() != first.arities()) {
            throw std::invalid_argument("arity mismatch between pooled datasets");
        }
    }
    std::size_t total = 0;
    for (const auto& d : datasets) total += d.rows();

    std::vector<Code> values;
    values.reserve(total * first.cols());
    std::vector<int> membership;
    membership.reserve(total);
    std::vector<std::size_t> sizes;
    int label = 1;
    for (const auto& d : datasets) {
        values.insert(values.end(), d.values().begin(), d.values().end());
        membership.insert(membership.end(), d.rows(), label);
        sizes.push_back(d.rows());
        ++label;
    }
    PooledSample p;
    p.data = CategoricalDataset(std::move(values), total, first.cols(), first.arities());
    p.membership = std::move(membership);
    p.sizes = std::move(sizes);
    return p;
}

std::vector<CategoricalDataset> split(const PooledSample& pooled) {
    const std::size_t k = pooled.sizes.size();
    const std::size_t p = pooled.data.cols();
    std::vector<std::vector<Code>> buffers(k);
    for (std::size_t i = 0; i < pooled.total(); ++i) {
        const int m = pooled.membership[i];
        auto& buf = buffers[static_cast<std::size_t>(m - 1)];
        buf.insert(buf.end(), pooled.data.row(i), pooled.data.row(i) + p);
    }
    std::vector<CategoricalDataset> out;
    out.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        out.emplace_back(std::move(buffers[s]), pooled.sizes[s], p, pooled.data.arities());
    }
    return out;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Undefined: return "undefined";
        case Status::Infeasible: return "infeasible";
        case Status::Error: return "error";
    }
    return "?";
}

const char* to_string(Direction d) {
    return d == Direction::HighMeansSimilar ? "high-means-similar" : "low-means-similar";
}

} // namespace datasim
