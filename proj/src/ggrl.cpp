#include "datasim/ggrl.hpp"

#include "datasim/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace datasim {

std::vector<GcrBox> greatest_common_refinement(const std::vector<std::vector<int>>& patterns_a,
                                               const std::vector<std::vector<int>>& patterns_b) {
    std::vector<GcrBox> boxes;
    for (std::size_t a = 0; a < patterns_a.size(); ++a) {
        for (std::size_t b = 0; b < patterns_b.size(); ++b) {
            bool compatible = true;
            const auto& pa = patterns_a[a];
            const auto& pb = patterns_b[b];
            for (std::size_t f = 0; f < pa.size() && compatible; ++f) {
                if (pa[f] >= 0 && pb[f] >= 0 && pa[f] != pb[f]) compatible = false;
            }
            if (compatible) boxes.push_back({static_cast<int>(a), static_cast<int>(b)});
        }
    }
    return boxes;
}

double ggrl_value(const std::vector<double>& p, const std::vector<double>& q, GgrlDiff f,
                  GgrlAgg g) {
    if (p.size() != q.size()) throw std::invalid_argument("proportion vectors differ in length");
    double sum = 0.0;
    double mx = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double v;
        if (f == GgrlDiff::Absolute) {
            v = std::abs(p[i] - q[i]);
        } else {
            const double m = 0.5 * (p[i] + q[i]);
            if (m <= 0.0) continue;
            v = std::abs(p[i] - q[i]) / m;
        }
        sum += v;
        mx = std::max(mx, v);
    }
    return g == GgrlAgg::Sum ? sum : mx;
}

SimilarityOutcome ggrl(const CategoricalDataset& d1, const CategoricalDataset& d2, GgrlDiff f,
                       GgrlAgg g, bool tune, std::uint64_t seed) {
    const Direction dir = Direction::LowMeansSimilar;
    if (!d1.has_target() || !d2.has_target()) {
        return SimilarityOutcome::error("missing-target", dir);
    }
    if (d1.arities() != d2.arities()) {
        return SimilarityOutcome::error("arity mismatch", dir);
    }
    for (const CategoricalDataset* d : {&d1, &d2}) {
        bool has0 = false, has1 = false;
        for (Code t : d->target()) {
            has0 = has0 || t == 0;
            has1 = has1 || t == 1;
        }
        if (!has0 || !has1) {
            return SimilarityOutcome::error("single-class-target", dir);
        }
    }

    auto fit_one = [&](const CategoricalDataset& d, std::uint64_t s) {
        const std::vector<double> x = dummy_encode(d);
        std::vector<int> y(d.rows());
        for (std::size_t i = 0; i < d.rows(); ++i) y[i] = d.target()[i];
        CartParams params;
        if (tune) params = tune_cart(x, d.rows(), d.dummy_width(), y, 2, s);
        return CartTree::fit(x, d.rows(), d.dummy_width(), y, 2, params);
    };
    const CartTree t1 = fit_one(d1, mix_u64(seed, 1));
    const CartTree t2 = fit_one(d2, mix_u64(seed, 2));

    const auto pat1 = t1.leaf_patterns();
    const auto pat2 = t2.leaf_patterns();
    const std::vector<GcrBox> boxes = greatest_common_refinement(pat1, pat2);

    // A row's GCR box is the pair of leaves it reaches in the two trees.
    std::vector<double> p(boxes.size(), 0.0), q(boxes.size(), 0.0);
    std::vector<int> box_of(pat1.size() * pat2.size(), -1);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        box_of[static_cast<std::size_t>(boxes[i].leaf_a) * pat2.size() +
               static_cast<std::size_t>(boxes[i].leaf_b)] = static_cast<int>(i);
    }
    auto tabulate = [&](const CategoricalDataset& d, std::vector<double>* out) {
        const std::vector<double> x = dummy_encode(d);
        const std::size_t w = d.dummy_width();
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const int la = t1.leaf_of(&x[i * w]);
            const int lb = t2.leaf_of(&x[i * w]);
            const int box = box_of[static_cast<std::size_t>(la) * pat2.size() +
                                   static_cast<std::size_t>(lb)];
            (*out)[static_cast<std::size_t>(box)] += 1.0;
        }
        for (double& v : *out) v /= static_cast<double>(d.rows());
    };
    tabulate(d1, &p);
    tabulate(d2, &q);

    SimilarityOutcome out;
    out.direction = dir;
    out.statistic = ggrl_value(p, q, f, g);
    out.diagnostics["gcr_boxes"] = static_cast<double>(boxes.size());
    out.diagnostics["leaves_1"] = static_cast<double>(t1.leaf_count());
    out.diagnostics["leaves_2"] = static_cast<double>(t2.leaf_count());
    return out;
}

} // namespace datasim
