#include "datasim/crossmatch.hpp"

#include "datasim/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace datasim {

std::size_t CrossCounts::cross_index(std::size_t k, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    // position of (i,j), i<j, in row-major upper triangle
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

double CrossCounts::cross_at(std::size_t i, std::size_t j) const {
    return cross[cross_index(k, i, j)];
}

double CrossCounts::total_cross() const {
    double t = 0.0;
    for (double c : cross) t += c;
    return t;
}

double CrossCounts::total_pairs() const {
    double t = total_cross();
    for (double w : within) t += w;
    return t;
}

CrossCounts cross_counts(const Matching& m, const std::vector<int>& membership) {
    std::size_t k = 0;
    for (int lbl : membership) {
        if (lbl < 1) throw std::invalid_argument("membership labels must be >= 1");
        k = std::max(k, static_cast<std::size_t>(lbl));
    }
    CrossCounts cc;
    cc.k = k;
    cc.within.assign(k, 0.0);
    cc.cross.assign(k * (k - 1) / 2, 0.0);
    for (const auto& [a, b] : m.pairs) {
        const std::size_t la = static_cast<std::size_t>(membership.at(static_cast<std::size_t>(a))) - 1;
        const std::size_t lb = static_cast<std::size_t>(membership.at(static_cast<std::size_t>(b))) - 1;
        if (la == lb) {
            cc.within[la] += 1.0;
        } else {
            cc.cross[CrossCounts::cross_index(k, la, lb)] += 1.0;
        }
    }
    return cc;
}

CrossMoments crossmatch_null_moments(const std::vector<std::size_t>& sizes) {
    const std::size_t k = sizes.size();
    if (k < 2) throw std::invalid_argument("need at least 2 samples");
    std::size_t N = 0;
    for (std::size_t s : sizes) N += s;
    if (N < 4) throw std::invalid_argument("need N >= 4");
    if (N % 2 != 0) throw std::invalid_argument("N must be even (phantom-adjusted)");

    const double Nd = static_cast<double>(N);
    const std::size_t P = N / 2;          // number of matched pairs
    const double Pd = static_cast<double>(P);
    const double pairs2 = Pd * (Pd - 1.0); // ordered pairs of distinct matching pairs
    const double denom2 = Nd * (Nd - 1.0);
    const double denom4 = denom2 * (Nd - 2.0) * (Nd - 3.0);

    const std::size_t m = k * (k - 1) / 2;
    CrossMoments out;
    out.k = k;
    out.pairs = P;
    out.mean.assign(m, 0.0);
    out.cov.assign(m * m, 0.0);

    auto n_of = [&](std::size_t i) { return static_cast<double>(sizes[i]); };

    // P(one fixed pair is an (i,j) cross) and pairwise joint probabilities
    // via falling-factorial label counting on 2 resp. 4 distinct slots.
    std::vector<double> p1(m, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            p1[CrossCounts::cross_index(k, i, j)] = 2.0 * n_of(i) * n_of(j) / denom2;
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        out.mean[a] = Pd * p1[a];
    }

    auto falling = [](double n, int r) {
        double v = 1.0;
        for (int t = 0; t < r; ++t) v *= (n - t);
        return v;
    };

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const std::size_t a = CrossCounts::cross_index(k, i, j);
            for (std::size_t l = 0; l < k; ++l) {
                for (std::size_t r = l + 1; r < k; ++r) {
                    const std::size_t b = CrossCounts::cross_index(k, l, r);
                    if (b < a) continue;
                    // Joint probability that two disjoint pairs are an (i,j)
                    // cross and an (l,r) cross respectively.
                    double joint;
                    std::map<std::size_t, int> need;
                    need[i] += 1;
                    need[j] += 1;
                    need[l] += 1;
                    need[r] += 1;
                    double numer = 4.0;  // 2 orientations per pair
                    for (const auto& [lbl, cnt] : need) {
                        numer *= falling(n_of(lbl), cnt);
                    }
                    joint = numer / denom4;

                    double cov;
                    if (a == b) {
                        cov = Pd * p1[a] * (1.0 - p1[a]) + pairs2 * (joint - p1[a] * p1[a]);
                    } else {
                        // One pair cannot realize two cross types, so the
                        // same-slot term vanishes and only disjoint slots count.
                        cov = pairs2 * joint - out.mean[a] * out.mean[b];
                    }
                    out.cov[a * m + b] = cov;
                    out.cov[b * m + a] = cov;
                }
            }
        }
    }
    return out;
}

std::size_t count_distinct_rows(const CategoricalDataset& d) {
    std::map<std::vector<Code>, int> seen;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        seen.emplace(std::vector<Code>(d.row(i), d.row(i) + d.cols()), 0);
    }
    return seen.size();
}

namespace {

SimilarityOutcome crossmatch_common(const Matching& m, const std::vector<int>& membership,
                                    const std::vector<std::size_t>& sizes,
                                    std::size_t distinct_values, bool mahalanobis) {
    const Direction dir = mahalanobis ? Direction::LowMeansSimilar : Direction::HighMeansSimilar;
    const std::size_t k = sizes.size();
    if (k < 2) return SimilarityOutcome::error("need at least 2 samples", dir);

    CrossCounts cc = cross_counts(m, membership);
    if (cc.k < k) {
        cc.k = k;
        cc.within.resize(k, 0.0);
        cc.cross.resize(k * (k - 1) / 2, 0.0);
    }

    std::vector<std::size_t> eff_sizes = sizes;
    if (m.phantom_partner >= 0) {
        // The phantom's partner is not tabulated; treat the effective pooled
        // sample as N-1 real nodes minus that partner.
        const std::size_t lbl =
            static_cast<std::size_t>(membership.at(static_cast<std::size_t>(m.phantom_partner))) - 1;
        eff_sizes[lbl] -= 1;
    }

    CrossMoments mom;
    try {
        mom = crossmatch_null_moments(eff_sizes);
    } catch (const std::exception& e) {
        return SimilarityOutcome::error(e.what(), dir);
    }

    const std::size_t dim = k * (k - 1) / 2;
    SimilarityOutcome out;
    out.direction = dir;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            out.diagnostics["a" + std::to_string(i + 1) + std::to_string(j + 1)] = cc.cross_at(i, j);
        }
    }
    if (distinct_values > 0 && distinct_values <= 2 * k) {
        out.diagnostics["tie-dominated-matching"] = 1.0;
    }

    if (!mahalanobis) {
        double e = 0.0;
        double var = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
            e += mom.mean[a];
            for (std::size_t b = 0; b < dim; ++b) var += mom.cov[a * dim + b];
        }
        if (var <= 1e-12 * std::max(1.0, e * e)) {
            auto u = SimilarityOutcome::undefined("null-variance-zero", dir);
            u.diagnostics = out.diagnostics;
            return u;
        }
        const double z = (cc.total_cross() - e) / std::sqrt(var);
        out.statistic = z;
        out.p_value = normal_cdf(z);  // few cross pairs signal dissimilarity
        return out;
    }

    Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd S(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
        d(static_cast<Eigen::Index>(a)) = cc.cross[a] - mom.mean[a];
        for (std::size_t b = 0; b < dim; ++b) {
            S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = mom.cov[a * dim + b];
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    const double scale = S.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, scale)) {
        auto u = SimilarityOutcome::undefined("covariance-singular", dir);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double stat = d.dot(ldlt.solve(d));
    out.statistic = stat;
    out.p_value = chi_square_upper_tail(stat, static_cast<double>(dim));
    return out;
}

} // namespace

SimilarityOutcome petrie_statistic(const Matching& m, const std::vector<int>& membership,
                                   const std::vector<std::size_t>& sizes,
                                   std::size_t distinct_values) {
    return crossmatch_common(m, membership, sizes, distinct_values, false);
}

SimilarityOutcome mmcm_statistic(const Matching& m, const std::vector<int>& membership,
                                 const std::vector<std::size_t>& sizes, std::size_t distinct_values) {
    return crossmatch_common(m, membership, sizes, distinct_values, true);
}

namespace {

SimilarityOutcome pooled_crossmatch(const PooledSample& pooled, Metric metric, MatchPolicy policy,
                                    bool mahalanobis) {
    const Direction dir = mahalanobis ? Direction::LowMeansSimilar : Direction::HighMeansSimilar;
    if (pooled.samples() < 2) return SimilarityOutcome::error("need at least 2 samples", dir);
    if (pooled.total() < 2) return SimilarityOutcome::error("need at least 2 rows", dir);
    const DistanceMatrix D = distance_matrix(pooled, metric);
    Matching m;
    try {
        m = min_weight_matching(D, policy);
    } catch (const std::exception& e) {
        return SimilarityOutcome::error(e.what(), dir);
    }
    const std::size_t distinct = count_distinct_rows(pooled.data);
    return crossmatch_common(m, pooled.membership, pooled.sizes, distinct, mahalanobis);
}

} // namespace

SimilarityOutcome petrie_statistic(const PooledSample& pooled, Metric metric, MatchPolicy policy) {
    return pooled_crossmatch(pooled, metric, policy, false);
}

SimilarityOutcome mmcm_statistic(const PooledSample& pooled, Metric metric, MatchPolicy policy) {
    return pooled_crossmatch(pooled, metric, policy, true);
}

} // namespace datasim
