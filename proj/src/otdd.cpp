#include "datasim/otdd.hpp"

#include "datasim/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace datasim {

namespace {

int hamming_rows(const std::vector<Code>& a, const std::vector<Code>& b) {
    int h = 0;
    for (std::size_t i = 0; i < a.size(); ++i) h += (a[i] != b[i]) ? 1 : 0;
    return h;
}

// Distinct (x, y) support of one dataset, lexicographic order.
struct LabeledSupport {
    std::vector<std::vector<Code>> rows;
    std::vector<Code> labels;
    std::vector<std::int64_t> counts;
};

LabeledSupport labeled_support(const CategoricalDataset& d) {
    std::map<std::pair<std::vector<Code>, Code>, std::int64_t> acc;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        std::vector<Code> row(d.row(i), d.row(i) + d.cols());
        acc[{std::move(row), d.target()[i]}] += 1;
    }
    LabeledSupport s;
    for (const auto& [key, cnt] : acc) {
        s.rows.push_back(key.first);
        s.labels.push_back(key.second);
        s.counts.push_back(cnt);
    }
    return s;
}

} // namespace

LabelConditional label_conditional(const std::vector<const CategoricalDataset*>& datasets, Code y) {
    std::map<std::vector<Code>, std::int64_t> acc;
    for (const CategoricalDataset* d : datasets) {
        for (std::size_t i = 0; i < d->rows(); ++i) {
            if (d->target()[i] != y) continue;
            acc[std::vector<Code>(d->row(i), d->row(i) + d->cols())] += 1;
        }
    }
    LabelConditional c;
    for (const auto& [row, cnt] : acc) {
        c.support.push_back(row);
        c.counts.push_back(cnt);
    }
    return c;
}

double inner_wasserstein(const LabelConditional& a, const LabelConditional& b, double qprime) {
    if (a.support.empty() || b.support.empty()) {
        throw std::invalid_argument("empty label conditional");
    }
    const std::size_t m = a.support.size();
    const std::size_t n = b.support.size();
    std::vector<double> cost(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double h = static_cast<double>(hamming_rows(a.support[i], b.support[j]));
            cost[i * n + j] = qprime == 1.0 ? h : std::pow(h, qprime);
        }
    }
    const TransportResult r = exact_transport(a.counts, b.counts, cost);
    return qprime == 1.0 ? r.cost : std::pow(r.cost, 1.0 / qprime);
}

SimilarityOutcome otdd(const CategoricalDataset& d1, const CategoricalDataset& d2,
                       const OtddParams& params) {
    const Direction dir = Direction::LowMeansSimilar;
    if (!d1.has_target() || !d2.has_target()) {
        return SimilarityOutcome::error("missing-target", dir);
    }
    if (d1.arities() != d2.arities()) {
        return SimilarityOutcome::error("arity mismatch", dir);
    }

    // Inner distances between the label conditionals of the pooled pair.
    const std::vector<const CategoricalDataset*> both{&d1, &d2};
    std::vector<Code> labels;
    for (const CategoricalDataset* d : both) {
        for (Code t : d->target()) {
            if (std::find(labels.begin(), labels.end(), t) == labels.end()) labels.push_back(t);
        }
    }
    std::sort(labels.begin(), labels.end());

    std::map<Code, LabelConditional> conditional;
    for (Code y : labels) conditional[y] = label_conditional(both, y);

    std::map<std::pair<Code, Code>, double> wtable;
    for (Code y : labels) {
        for (Code yp : labels) {
            if (y == yp) {
                wtable[{y, yp}] = 0.0;
            } else if (y < yp) {
                const double w = inner_wasserstein(conditional[y], conditional[yp], params.qprime);
                wtable[{y, yp}] = w;
                wtable[{yp, y}] = w;
            }
        }
    }

    const LabeledSupport s1 = labeled_support(d1);
    const LabeledSupport s2 = labeled_support(d2);
    const std::size_t m = s1.rows.size();
    const std::size_t n = s2.rows.size();
    std::vector<double> cost(m * n);
    const double qp = params.qprime;
    const double q = params.q;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double h = static_cast<double>(hamming_rows(s1.rows[i], s2.rows[j]));
            const double w = wtable[{s1.labels[i], s2.labels[j]}];
            double dz;
            if (qp == 1.0) {
                dz = h + w;
            } else {
                dz = std::pow(std::pow(h, qp) + std::pow(w, qp), 1.0 / qp);
            }
            cost[i * n + j] = q == 1.0 ? dz : std::pow(dz, q);
        }
    }

    SimilarityOutcome out;
    out.direction = dir;
    if (params.mode == OtddMode::Exact) {
        const TransportResult r = exact_transport(s1.counts, s2.counts, cost);
        out.statistic = q == 1.0 ? r.cost : std::pow(r.cost, 1.0 / q);
        out.diagnostics["outer_support_1"] = static_cast<double>(m);
        out.diagnostics["outer_support_2"] = static_cast<double>(n);
        return out;
    }
    const TransportResult r =
        sinkhorn_transport(s1.counts, s2.counts, cost, params.sinkhorn_eps, 5000, 1e-6);
    if (!r.converged) {
        auto e = SimilarityOutcome::error("sinkhorn-diverged", dir);
        e.diagnostics["iterations"] = static_cast<double>(r.iterations);
        e.diagnostics["marginal_violation"] = r.marginal_violation;
        return e;
    }
    out.statistic = q == 1.0 ? r.cost : std::pow(r.cost, 1.0 / q);
    out.diagnostics["iterations"] = static_cast<double>(r.iterations);
    return out;
}

} // namespace datasim
