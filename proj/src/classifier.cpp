#include "datasim/classifier.hpp"

#include "datasim/distance.hpp"
#include "datasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace datasim {

Split stratified_split(const std::vector<int>& cls, double train_fraction, std::uint64_t seed) {
    int k = 0;
    for (int c : cls) k = std::max(k, c + 1);
    Split s;
    Rng rng(seed);
    for (int c = 0; c < k; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (cls[i] == c) idx.push_back(i);
        }
        rng.shuffle(idx);
        const std::size_t n_train =
            static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_train ? s.train : s.test).push_back(idx[i]);
        }
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

int KnnModel::predict(const double* row) const {
    // Partial sort of (squared distance, index); ties resolved by index so
    // the prediction is deterministic.
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[i * d + j] - row[j];
            sq += diff * diff;
        }
        dist[i] = {sq, i};
    }
    const std::size_t kk = std::min(static_cast<std::size_t>(k), n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::vector<int> votes(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < kk; ++i) {
        ++votes[static_cast<std::size_t>(y[dist[i].second])];
    }
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

KnnModel fit_knn(const std::vector<double>& x, std::size_t n, std::size_t d,
                 const std::vector<int>& y, int num_classes, std::uint64_t seed) {
    KnnModel model;
    model.x = x;
    model.y = y;
    model.n = n;
    model.d = d;
    model.num_classes = num_classes;

    const int candidates[] = {1, 3, 5, 7, 9};
    const int folds = 5;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    double best_acc = -1.0;
    int best_k = 1;
    for (int k : candidates) {
        if (static_cast<std::size_t>(k) > n - n / folds) continue;
        double correct = 0.0, seen = 0.0;
        for (int f = 0; f < folds; ++f) {
            KnnModel fold;
            fold.d = d;
            fold.num_classes = num_classes;
            fold.k = k;
            std::vector<std::size_t> test;
            for (std::size_t i = 0; i < n; ++i) {
                if (static_cast<int>(i % folds) == f) {
                    test.push_back(order[i]);
                } else {
                    fold.x.insert(fold.x.end(), x.begin() + static_cast<std::ptrdiff_t>(order[i] * d),
                                  x.begin() + static_cast<std::ptrdiff_t>((order[i] + 1) * d));
                    fold.y.push_back(y[order[i]]);
                }
            }
            fold.n = fold.y.size();
            if (fold.n < static_cast<std::size_t>(k) || test.empty()) continue;
            for (std::size_t i : test) {
                seen += 1.0;
                if (fold.predict(&x[i * d]) == y[i]) correct += 1.0;
            }
        }
        const double acc = seen > 0.0 ? correct / seen : 0.0;
        if (acc > best_acc + 1e-12) {
            best_acc = acc;
            best_k = k;
        }
    }
    model.k = best_k;
    return model;
}

int MlpModel::predict(const double* row) const {
    std::vector<double> h(static_cast<std::size_t>(hidden));
    for (int j = 0; j < hidden; ++j) {
        double a = b1[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < d; ++i) {
            a += w1[i * static_cast<std::size_t>(hidden) + static_cast<std::size_t>(j)] * row[i];
        }
        h[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-a));
    }
    int best = 0;
    double best_v = -1e300;
    for (int c = 0; c < num_classes; ++c) {
        double a = b2[static_cast<std::size_t>(c)];
        for (int j = 0; j < hidden; ++j) {
            a += w2[static_cast<std::size_t>(j) * static_cast<std::size_t>(num_classes) +
                    static_cast<std::size_t>(c)] *
                 h[static_cast<std::size_t>(j)];
        }
        if (a > best_v) {
            best_v = a;
            best = c;
        }
    }
    return best;
}

MlpModel fit_mlp(const std::vector<double>& x, std::size_t n, std::size_t d,
                 const std::vector<int>& y, int num_classes, const MlpParams& params,
                 std::uint64_t seed) {
    MlpModel m;
    m.d = d;
    m.num_classes = num_classes;
    m.hidden = params.hidden;
    const std::size_t H = static_cast<std::size_t>(params.hidden);
    const std::size_t C = static_cast<std::size_t>(num_classes);
    Rng rng(seed);
    m.w1.assign(d * H, 0.0);
    m.b1.assign(H, 0.0);
    m.w2.assign(H * C, 0.0);
    m.b2.assign(C, 0.0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, d)));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(H));
    for (double& w : m.w1) w = s1 * rng.next_normal();
    for (double& w : m.w2) w = s2 * rng.next_normal();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> h(H), dh(H), p(C);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(params.batch)) {
            const std::size_t end = std::min(n, start + static_cast<std::size_t>(params.batch));
            const double scale = params.learning_rate / static_cast<double>(end - start);
            // Accumulate gradients over the minibatch.
            std::vector<double> gw1(d * H, 0.0), gb1(H, 0.0), gw2(H * C, 0.0), gb2(C, 0.0);
            for (std::size_t t = start; t < end; ++t) {
                const double* row = &x[order[t] * d];
                for (std::size_t j = 0; j < H; ++j) {
                    double a = m.b1[j];
                    for (std::size_t i = 0; i < d; ++i) a += m.w1[i * H + j] * row[i];
                    h[j] = 1.0 / (1.0 + std::exp(-a));
                }
                double mx = -1e300;
                for (std::size_t c = 0; c < C; ++c) {
                    double a = m.b2[c];
                    for (std::size_t j = 0; j < H; ++j) a += m.w2[j * C + c] * h[j];
                    p[c] = a;
                    mx = std::max(mx, a);
                }
                double z = 0.0;
                for (std::size_t c = 0; c < C; ++c) {
                    p[c] = std::exp(p[c] - mx);
                    z += p[c];
                }
                for (std::size_t c = 0; c < C; ++c) p[c] /= z;
                const std::size_t label = static_cast<std::size_t>(y[order[t]]);
                // Softmax cross-entropy backprop.
                for (std::size_t c = 0; c < C; ++c) {
                    const double delta = p[c] - (c == label ? 1.0 : 0.0);
                    gb2[c] += delta;
                    for (std::size_t j = 0; j < H; ++j) gw2[j * C + c] += delta * h[j];
                }
                for (std::size_t j = 0; j < H; ++j) {
                    double acc = 0.0;
                    for (std::size_t c = 0; c < C; ++c) {
                        acc += (p[c] - (c == label ? 1.0 : 0.0)) * m.w2[j * C + c];
                    }
                    dh[j] = acc * h[j] * (1.0 - h[j]);
                    gb1[j] += dh[j];
                    for (std::size_t i = 0; i < d; ++i) gw1[i * H + j] += dh[j] * row[i];
                }
            }
            for (std::size_t i = 0; i < d * H; ++i) m.w1[i] -= scale * gw1[i];
            for (std::size_t j = 0; j < H; ++j) m.b1[j] -= scale * gb1[j];
            for (std::size_t i = 0; i < H * C; ++i) m.w2[i] -= scale * gw2[i];
            for (std::size_t c = 0; c < C; ++c) m.b2[c] -= scale * gb2[c];
        }
    }
    return m;
}

ForestOob forest_oob(const std::vector<double>& x, std::size_t n, std::size_t d,
                     const std::vector<int>& y, int num_classes, int trees, std::uint64_t seed) {
    CartParams params;
    params.max_depth = 24;
    params.min_leaf = 1;
    params.mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(d)))));

    std::vector<std::vector<int>> votes(n, std::vector<int>(static_cast<std::size_t>(num_classes), 0));
    std::vector<char> in_bag(n, 0);
    for (int t = 0; t < trees; ++t) {
        Rng rng(mix_u64(seed, static_cast<std::uint64_t>(t) + 1));
        std::fill(in_bag.begin(), in_bag.end(), 0);
        std::vector<std::size_t> bag(n);
        for (std::size_t i = 0; i < n; ++i) {
            bag[i] = static_cast<std::size_t>(rng.next_below(n));
            in_bag[bag[i]] = 1;
        }
        const CartTree tree = CartTree::fit(x, n, d, y, num_classes, params, &rng, &bag);
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_bag[i]) {
                ++votes[i][static_cast<std::size_t>(tree.predict(&x[i * d]))];
            }
        }
    }

    ForestOob oob;
    oob.rows_total = n;
    oob.per_class_error.assign(static_cast<std::size_t>(num_classes), 0.0);
    std::vector<double> class_seen(static_cast<std::size_t>(num_classes), 0.0);
    double wrong = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int total = 0;
        for (int v : votes[i]) total += v;
        if (total == 0) continue;
        ++oob.rows_with_votes;
        int pred = 0;
        for (int c = 1; c < num_classes; ++c) {
            if (votes[i][static_cast<std::size_t>(c)] > votes[i][static_cast<std::size_t>(pred)]) {
                pred = c;
            }
        }
        const std::size_t truth = static_cast<std::size_t>(y[i]);
        class_seen[truth] += 1.0;
        if (pred != y[i]) {
            wrong += 1.0;
            oob.per_class_error[truth] += 1.0;
        }
    }
    oob.overall_error = oob.rows_with_votes > 0 ? wrong / static_cast<double>(oob.rows_with_votes) : 0.0;
    for (std::size_t c = 0; c < oob.per_class_error.size(); ++c) {
        oob.per_class_error[c] = class_seen[c] > 0.0 ? oob.per_class_error[c] / class_seen[c] : 0.0;
    }
    return oob;
}

namespace {

struct PreparedPool {
    std::vector<double> x;
    std::vector<int> cls;  // membership - 1
    std::size_t n = 0, d = 0;
    int k = 0;
};

PreparedPool prepare(const PooledSample& pooled) {
    PreparedPool p;
    p.x = dummy_encode(pooled.data);
    p.n = pooled.total();
    p.d = pooled.data.dummy_width();
    p.k = static_cast<int>(pooled.samples());
    p.cls.resize(p.n);
    for (std::size_t i = 0; i < p.n; ++i) p.cls[i] = pooled.membership[i] - 1;
    return p;
}

bool split_covers_all_classes(const Split& s, const std::vector<int>& cls, int k) {
    std::vector<int> tr(static_cast<std::size_t>(k), 0), te(static_cast<std::size_t>(k), 0);
    for (std::size_t i : s.train) ++tr[static_cast<std::size_t>(cls[i])];
    for (std::size_t i : s.test) ++te[static_cast<std::size_t>(cls[i])];
    for (int c = 0; c < k; ++c) {
        if (tr[static_cast<std::size_t>(c)] < 2 || te[static_cast<std::size_t>(c)] < 2) return false;
    }
    return true;
}

SimilarityOutcome held_out_test(const PooledSample& pooled, double split_fraction,
                                std::uint64_t seed, bool use_error, C2stClassifier classifier,
                                bool use_cart) {
    const Direction dir = use_error ? Direction::HighMeansSimilar : Direction::LowMeansSimilar;
    PreparedPool p = prepare(pooled);
    if (split_fraction <= 0.0 || split_fraction >= 1.0) {
        return SimilarityOutcome::error("split fraction must be in (0,1)", dir);
    }
    const Split split = stratified_split(p.cls, split_fraction, seed);
    if (!split_covers_all_classes(split, p.cls, p.k)) {
        return SimilarityOutcome::error("degenerate-split", dir);
    }

    std::vector<double> xtr;
    std::vector<int> ytr;
    xtr.reserve(split.train.size() * p.d);
    for (std::size_t i : split.train) {
        xtr.insert(xtr.end(), p.x.begin() + static_cast<std::ptrdiff_t>(i * p.d),
                   p.x.begin() + static_cast<std::ptrdiff_t>((i + 1) * p.d));
        ytr.push_back(p.cls[i]);
    }
    const std::size_t ntr = ytr.size();

    std::vector<int> predictions;
    predictions.reserve(split.test.size());
    if (use_cart) {
        CartParams params;  // defaults: depth 8, min leaf 5
        const CartTree tree = CartTree::fit(xtr, ntr, p.d, ytr, p.k, params);
        for (std::size_t i : split.test) predictions.push_back(tree.predict(&p.x[i * p.d]));
    } else if (classifier == C2stClassifier::Knn) {
        const KnnModel knn = fit_knn(xtr, ntr, p.d, ytr, p.k, mix_u64(seed, 1));
        for (std::size_t i : split.test) predictions.push_back(knn.predict(&p.x[i * p.d]));
    } else {
        const MlpModel mlp = fit_mlp(xtr, ntr, p.d, ytr, p.k, MlpParams{}, mix_u64(seed, 2));
        for (std::size_t i : split.test) predictions.push_back(mlp.predict(&p.x[i * p.d]));
    }

    double correct = 0.0;
    std::vector<double> test_share(static_cast<std::size_t>(p.k), 0.0);
    for (std::size_t t = 0; t < split.test.size(); ++t) {
        const std::size_t i = split.test[t];
        test_share[static_cast<std::size_t>(p.cls[i])] += 1.0;
        if (predictions[t] == p.cls[i]) correct += 1.0;
    }
    const double n_test = static_cast<double>(split.test.size());
    const double accuracy = correct / n_test;
    const double p0 = *std::max_element(test_share.begin(), test_share.end()) / n_test;

    SimilarityOutcome out;
    out.direction = dir;
    out.diagnostics["n_train"] = static_cast<double>(ntr);
    out.diagnostics["n_test"] = n_test;
    out.diagnostics["naive_rate"] = p0;
    const double se = std::sqrt(std::max(1e-12, p0 * (1.0 - p0) / n_test));
    const double z = (accuracy - p0) / se;
    if (use_error) {
        out.statistic = 1.0 - accuracy;
        out.p_value = 1.0 - normal_cdf(z);  // rejects for high accuracy = low error
    } else {
        out.statistic = accuracy;
        out.p_value = 1.0 - normal_cdf(z);
    }
    return out;
}

} // namespace

SimilarityOutcome c2st(const PooledSample& pooled, C2stClassifier classifier,
                       double split_fraction, std::uint64_t seed) {
    return held_out_test(pooled, split_fraction, seed, false, classifier, false);
}

SimilarityOutcome ymrzl(const PooledSample& pooled, double split_fraction, std::uint64_t seed) {
    return held_out_test(pooled, split_fraction, seed, true, C2stClassifier::Knn, true);
}

SimilarityOutcome hmn(const PooledSample& pooled, OobMode mode, int trees, std::uint64_t seed) {
    const Direction dir = Direction::HighMeansSimilar;
    if (pooled.samples() != 2) {
        return SimilarityOutcome::error("two samples required", dir);
    }
    if (trees < 1) {
        return SimilarityOutcome::error("trees must be >= 1", dir);
    }
    PreparedPool p = prepare(pooled);
    const ForestOob oob = forest_oob(p.x, p.n, p.d, p.cls, 2, trees, seed);

    SimilarityOutcome out;
    out.direction = dir;
    out.diagnostics["oob_error"] = oob.overall_error;
    out.diagnostics["oob_error_class1"] = oob.per_class_error[0];
    out.diagnostics["oob_error_class2"] = oob.per_class_error[1];
    out.diagnostics["rows_with_votes"] = static_cast<double>(oob.rows_with_votes);

    const double n1 = static_cast<double>(pooled.sizes[0]);
    const double n2 = static_cast<double>(pooled.sizes[1]);
    const double N = n1 + n2;
    if (mode == OobMode::Overall) {
        const double p0 = std::min(n1, n2) / N;
        const double se = std::sqrt(p0 * (1.0 - p0) / N);
        const double z = (oob.overall_error - p0) / se;
        out.statistic = z;
        out.p_value = normal_cdf(z);  // rejects for error far below the naive rate
        return out;
    }
    const double e1 = oob.per_class_error[0];
    const double e2 = oob.per_class_error[1];
    const double mean_err = 0.5 * (e1 + e2);
    const double var = 0.25 * (e1 * (1.0 - e1) / n1 + e2 * (1.0 - e2) / n2);
    if (var <= 0.0) {
        auto u = SimilarityOutcome::undefined(
            mean_err == 0.0 ? "perfect-classification" : "zero-error-variance", dir);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double z = (mean_err - 0.5) / std::sqrt(var);
    out.statistic = z;
    out.p_value = normal_cdf(z);
    return out;
}

} // namespace datasim
