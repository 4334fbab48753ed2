#include "datasim/cmdist.hpp"

#include "datasim/distance.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace datasim {

FeatureFrequencies feature_frequencies(const CategoricalDataset& d) {
    if (d.has_target()) {
        throw std::invalid_argument("feature_frequencies expects no target column");
    }
    const std::size_t n = d.rows();
    const std::size_t w = d.dummy_width();
    FeatureFrequencies f;
    f.m = w;
    f.theta.assign(w, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < d.cols(); ++j) {
            const Code c = d.at(i, j);
            if (c > 0) f.theta[off + static_cast<std::size_t>(c - 1)] += 1.0;
            off += static_cast<std::size_t>(d.arities()[j] - 1);
        }
    }
    for (double& t : f.theta) t /= static_cast<double>(n);
    return f;
}

FeatureCovariance feature_covariance(const std::vector<Code>& arities, CovMode mode) {
    std::size_t m = 0;
    double states = 1.0;
    for (Code a : arities) {
        if (a < 2) throw std::invalid_argument("arity<2");
        m += static_cast<std::size_t>(a - 1);
        states *= static_cast<double>(a);
    }
    FeatureCovariance out;
    out.m = m;

    if (mode == CovMode::ClosedForm) {
        out.cov.assign(m * m, 0.0);
        std::size_t off = 0;
        for (Code a : arities) {
            const std::size_t w = static_cast<std::size_t>(a - 1);
            const double pi = 1.0 / static_cast<double>(a);
            for (std::size_t r = 0; r < w; ++r) {
                for (std::size_t c = 0; c < w; ++c) {
                    const double v = (r == c ? pi : 0.0) - pi * pi;
                    out.cov[(off + r) * m + (off + c)] = v;
                }
            }
            off += w;
        }
        return out;
    }

    if (states > kEnumerationCap) {
        out.feasible = false;
        out.reason = "sample-space-too-large";
        return out;
    }

    // Literal uniform-over-sample-space covariance. S(w) is sparse (at most
    // one active indicator per column), so accumulate over active pairs only.
    const std::size_t total = static_cast<std::size_t>(states);
    const std::size_t p = arities.size();
    std::vector<std::size_t> offsets(p, 0);
    {
        std::size_t off = 0;
        for (std::size_t j = 0; j < p; ++j) {
            offsets[j] = off;
            off += static_cast<std::size_t>(arities[j] - 1);
        }
    }
    std::vector<double> e1(m, 0.0);
    std::vector<double> e2(m * m, 0.0);
    std::vector<Code> state(p, 0);
    std::vector<std::size_t> active;
    active.reserve(p);
    for (std::size_t idx = 0; idx < total; ++idx) {
        active.clear();
        for (std::size_t j = 0; j < p; ++j) {
            if (state[j] > 0) {
                active.push_back(offsets[j] + static_cast<std::size_t>(state[j] - 1));
            }
        }
        for (std::size_t a : active) {
            e1[a] += 1.0;
            for (std::size_t b : active) e2[a * m + b] += 1.0;
        }
        // odometer increment
        for (std::size_t j = 0; j < p; ++j) {
            if (++state[j] < arities[j]) break;
            state[j] = 0;
        }
    }
    const double inv = 1.0 / static_cast<double>(total);
    out.cov.assign(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            out.cov[a * m + b] = e2[a * m + b] * inv - (e1[a] * inv) * (e1[b] * inv);
        }
    }
    return out;
}

SimilarityOutcome cm_distance(const CategoricalDataset& d1, const CategoricalDataset& d2,
                              CovMode mode) {
    const Direction dir = Direction::LowMeansSimilar;
    if (d1.arities() != d2.arities()) {
        return SimilarityOutcome::error("arity mismatch", dir);
    }
    const CategoricalDataset a = d1.has_target() ? d1.without_target() : d1;
    const CategoricalDataset b = d2.has_target() ? d2.without_target() : d2;

    const FeatureFrequencies f1 = feature_frequencies(a);
    const FeatureFrequencies f2 = feature_frequencies(b);
    const FeatureCovariance fc = feature_covariance(a.arities(), mode);
    if (!fc.feasible) {
        return SimilarityOutcome::infeasible(fc.reason, dir);
    }

    const auto m = static_cast<Eigen::Index>(fc.m);
    Eigen::VectorXd diff(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        diff(i) = f1.theta[static_cast<std::size_t>(i)] - f2.theta[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd S(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            S(r, c) = fc.cov[static_cast<std::size_t>(r) * fc.m + static_cast<std::size_t>(c)];
        }
    }

    SimilarityOutcome out;
    out.direction = dir;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    double d2stat;
    const double scale = S.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, scale)) {
        // Singular feature covariance: fall back to the pseudo-inverse.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        const double tol = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        Eigen::VectorXd inv = es.eigenvalues();
        for (Eigen::Index i = 0; i < m; ++i) {
            inv(i) = inv(i) > tol ? 1.0 / inv(i) : 0.0;
        }
        const Eigen::VectorXd t = es.eigenvectors().transpose() * diff;
        d2stat = (t.array().square() * inv.array()).sum();
        out.diagnostics["pseudo-inverse"] = 1.0;
    } else {
        d2stat = diff.dot(ldlt.solve(diff));
    }
    d2stat = std::max(0.0, d2stat);
    out.statistic = std::sqrt(d2stat);
    out.diagnostics["d_squared"] = d2stat;
    return out;
}

} // namespace datasim
