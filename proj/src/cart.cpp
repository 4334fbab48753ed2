#include "datasim/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace datasim {

namespace {

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
}

} // namespace

class CartBuilder {
public:
    CartBuilder(const std::vector<double>& x, std::size_t n, std::size_t d,
                const std::vector<int>& y, int num_classes, const CartParams& params, Rng* rng)
        : x_(x), n_(n), d_(d), y_(y), c_(num_classes), params_(params), rng_(rng) {}

    CartTree build(const std::vector<std::size_t>* rows) {
        std::vector<std::size_t> idx;
        if (rows) {
            idx = *rows;
        } else {
            idx.resize(n_);
            std::iota(idx.begin(), idx.end(), 0);
        }
        tree_.d_ = d_;
        grow(idx, 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t>& idx, int depth) {
        std::vector<double> counts(static_cast<std::size_t>(c_), 0.0);
        for (std::size_t i : idx) counts[static_cast<std::size_t>(y_[i])] += 1.0;
        const double total = static_cast<double>(idx.size());

        const int node_id = static_cast<int>(tree_.nodes_.size());
        tree_.nodes_.emplace_back();

        int best_feature = -1;
        double best_gain = 0.0;
        std::vector<std::size_t> best_left, best_right;
        const double impurity = gini(counts, total);

        if (depth < params_.max_depth && impurity > 0.0 &&
            idx.size() >= 2 * static_cast<std::size_t>(params_.min_leaf)) {
            std::vector<int> features;
            if (params_.mtry > 0 && rng_ != nullptr &&
                params_.mtry < static_cast<int>(d_)) {
                std::vector<int> all(d_);
                std::iota(all.begin(), all.end(), 0);
                for (int t = 0; t < params_.mtry; ++t) {
                    const std::size_t j =
                        static_cast<std::size_t>(t) +
                        static_cast<std::size_t>(rng_->next_below(d_ - static_cast<std::size_t>(t)));
                    std::swap(all[static_cast<std::size_t>(t)], all[j]);
                }
                features.assign(all.begin(), all.begin() + params_.mtry);
                std::sort(features.begin(), features.end());
            } else {
                features.resize(d_);
                std::iota(features.begin(), features.end(), 0);
            }

            for (int f : features) {
                std::vector<double> left_counts(static_cast<std::size_t>(c_), 0.0);
                double left_total = 0.0;
                for (std::size_t i : idx) {
                    if (x_[i * d_ + static_cast<std::size_t>(f)] <= 0.5) {
                        left_counts[static_cast<std::size_t>(y_[i])] += 1.0;
                        left_total += 1.0;
                    }
                }
                const double right_total = total - left_total;
                if (left_total < params_.min_leaf || right_total < params_.min_leaf) continue;
                std::vector<double> right_counts(static_cast<std::size_t>(c_), 0.0);
                for (int cc = 0; cc < c_; ++cc) {
                    right_counts[static_cast<std::size_t>(cc)] =
                        counts[static_cast<std::size_t>(cc)] - left_counts[static_cast<std::size_t>(cc)];
                }
                const double gain = impurity - (left_total / total) * gini(left_counts, left_total) -
                                    (right_total / total) * gini(right_counts, right_total);
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_feature = f;
                }
            }
        }

        if (best_feature < 0) {
            auto& node = tree_.nodes_[static_cast<std::size_t>(node_id)];
            node.leaf_id = static_cast<int>(tree_.leaf_total_++);
            int arg = 0;
            for (int cc = 1; cc < c_; ++cc) {
                if (counts[static_cast<std::size_t>(cc)] > counts[static_cast<std::size_t>(arg)]) arg = cc;
            }
            node.majority = arg;
            return node_id;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            if (x_[i * d_ + static_cast<std::size_t>(best_feature)] <= 0.5) left.push_back(i);
            else right.push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        auto& node = tree_.nodes_[static_cast<std::size_t>(node_id)];
        node.feature = best_feature;
        node.left = l;
        node.right = r;
        return node_id;
    }

    const std::vector<double>& x_;
    std::size_t n_;
    std::size_t d_;
    const std::vector<int>& y_;
    int c_;
    CartParams params_;
    Rng* rng_;
    CartTree tree_;
};

CartTree CartTree::fit(const std::vector<double>& x, std::size_t n, std::size_t d,
                       const std::vector<int>& y, int num_classes, const CartParams& params,
                       Rng* rng, const std::vector<std::size_t>* rows) {
    if (n == 0 || d == 0) throw std::invalid_argument("empty training data");
    CartBuilder b(x, n, d, y, num_classes, params, rng);
    return b.build(rows);
}

int CartTree::predict(const double* row) const {
    int cur = 0;
    while (nodes_[static_cast<std::size_t>(cur)].leaf_id < 0) {
        const auto& node = nodes_[static_cast<std::size_t>(cur)];
        cur = row[node.feature] <= 0.5 ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(cur)].majority;
}

int CartTree::leaf_of(const double* row) const {
    int cur = 0;
    while (nodes_[static_cast<std::size_t>(cur)].leaf_id < 0) {
        const auto& node = nodes_[static_cast<std::size_t>(cur)];
        cur = row[node.feature] <= 0.5 ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(cur)].leaf_id;
}

int CartTree::depth() const {
    // Iterative depth over the explicit tree.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int best = 0;
    while (!stack.empty()) {
        const auto [id, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        const auto& node = nodes_[static_cast<std::size_t>(id)];
        if (node.leaf_id < 0) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return best;
}

std::vector<std::vector<int>> CartTree::leaf_patterns() const {
    std::vector<std::vector<int>> out(leaf_total_);
    std::vector<int> cur(d_, -1);
    auto walk = [&](auto&& self, int id) -> void {
        const auto& node = nodes_[static_cast<std::size_t>(id)];
        if (node.leaf_id >= 0) {
            out[static_cast<std::size_t>(node.leaf_id)] = cur;
            return;
        }
        const int prev = cur[static_cast<std::size_t>(node.feature)];
        cur[static_cast<std::size_t>(node.feature)] = 0;
        self(self, node.left);
        cur[static_cast<std::size_t>(node.feature)] = 1;
        self(self, node.right);
        cur[static_cast<std::size_t>(node.feature)] = prev;
    };
    walk(walk, 0);
    return out;
}

CartParams tune_cart(const std::vector<double>& x, std::size_t n, std::size_t d,
                     const std::vector<int>& y, int num_classes, std::uint64_t seed) {
    const int depths[] = {2, 4, 8};
    const int leaves[] = {2, 5, 10};
    const int folds = 5;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    CartParams best;
    double best_acc = -1.0;
    for (int depth : depths) {
        for (int leaf : leaves) {
            CartParams p;
            p.max_depth = depth;
            p.min_leaf = leaf;
            double correct = 0.0;
            double seen = 0.0;
            for (int f = 0; f < folds; ++f) {
                std::vector<std::size_t> train, test;
                for (std::size_t i = 0; i < n; ++i) {
                    if (static_cast<int>(i % folds) == f) test.push_back(order[i]);
                    else train.push_back(order[i]);
                }
                if (train.empty() || test.empty()) continue;
                const CartTree t = CartTree::fit(x, n, d, y, num_classes, p, nullptr, &train);
                for (std::size_t i : test) {
                    seen += 1.0;
                    if (t.predict(&x[i * d]) == y[i]) correct += 1.0;
                }
            }
            const double acc = seen > 0.0 ? correct / seen : 0.0;
            if (acc > best_acc + 1e-12) {
                best_acc = acc;
                best = p;
            }
        }
    }
    return best;
}

} // namespace datasim
