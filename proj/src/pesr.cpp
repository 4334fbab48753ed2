#include "datasim/pesr.hpp"

#include "datasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace datasim {

double upper_threshold(std::vector<double> valid_null) {
    if (valid_null.empty()) throw std::invalid_argument("empty null sample");
    std::sort(valid_null.begin(), valid_null.end());
    const std::size_t n = valid_null.size();
    // ceil(0.95 n)-th order statistic, 1-based.
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(n)) + 1e-9);
    rank = std::min(std::max<std::size_t>(rank, 1), n);
    return valid_null[rank - 1];
}

double lower_threshold(std::vector<double> valid_null) {
    if (valid_null.empty()) throw std::invalid_argument("empty null sample");
    std::sort(valid_null.begin(), valid_null.end());
    const std::size_t n = valid_null.size();
    // (floor(0.05 n) + 1)-th order statistic, 1-based.
    std::size_t rank = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(n) + 1e-9)) + 1;
    rank = std::min(rank, n);
    return valid_null[rank - 1];
}

PesrResult pesr(const std::vector<double>& null_stats, const std::vector<double>& alt_stats,
                Direction direction) {
    std::vector<double> null_valid;
    null_valid.reserve(null_stats.size());
    for (double v : null_stats) {
        if (std::isfinite(v)) null_valid.push_back(v);
    }
    std::vector<double> alt_valid;
    alt_valid.reserve(alt_stats.size());
    std::size_t missing = 0;
    for (double v : alt_stats) {
        if (std::isfinite(v)) alt_valid.push_back(v);
        else ++missing;
    }
    if (null_valid.empty() || alt_stats.empty()) {
        throw std::invalid_argument("empty valid sets");
    }

    PesrResult out;
    out.n_valid = alt_valid.size();
    out.n_missing = missing;
    const double allowed = kExclusionFraction * static_cast<double>(alt_stats.size());
    if (static_cast<double>(missing) > allowed || alt_valid.empty()) {
        return out;  // pesr stays missing
    }

    double threshold;
    std::size_t extreme = 0;
    if (direction == Direction::LowMeansSimilar) {
        threshold = upper_threshold(null_valid);
        for (double v : alt_valid) {
            if (v > threshold) ++extreme;
        }
    } else {
        threshold = lower_threshold(null_valid);
        for (double v : alt_valid) {
            if (v < threshold) ++extreme;
        }
    }
    const double phat = static_cast<double>(extreme) / static_cast<double>(alt_valid.size());
    out.pesr = phat;
    out.threshold = threshold;
    out.mcse = std::sqrt(phat * (1.0 - phat) / static_cast<double>(alt_valid.size()));
    return out;
}

double asymptotic_power(const std::vector<double>& p_values, double alpha) {
    std::size_t valid = 0;
    std::size_t rejected = 0;
    for (double p : p_values) {
        if (!std::isfinite(p)) continue;
        ++valid;
        if (p < alpha) ++rejected;
    }
    if (valid == 0) return 0.0;
    return static_cast<double>(rejected) / static_cast<double>(valid);
}

GapSummary gap_to_best(const std::vector<PesrRecord>& records) {
    // Group records by scenario; null scenarios are excluded.
    std::map<std::string, std::vector<const PesrRecord*>> by_scenario;
    for (const auto& r : records) {
        if (r.family == "null") continue;
        by_scenario[r.scenario_id].push_back(&r);
    }

    std::map<std::string, std::vector<double>> overall_gaps;
    std::map<std::string, std::map<std::string, std::vector<double>>> cell_gaps;
    for (const auto& [scenario, rows] : by_scenario) {
        double best = 0.0;
        bool any = false;
        for (const PesrRecord* r : rows) {
            if (r->pesr) {
                best = any ? std::max(best, *r->pesr) : *r->pesr;
                any = true;
            }
        }
        if (!any) best = 0.0;
        for (const PesrRecord* r : rows) {
            const double gap = r->pesr ? best - *r->pesr : 1.0;
            overall_gaps[r->method_id].push_back(gap);
            const std::string cell = r->balance + "-c" + std::to_string(r->arity) + "-p" +
                                     std::to_string(r->p);
            cell_gaps[cell][r->method_id].push_back(gap);
        }
    }

    GapSummary out;
    for (auto& [method, gaps] : overall_gaps) {
        out.overall[method] = median(gaps);
    }
    for (auto& [cell, methods] : cell_gaps) {
        for (auto& [method, gaps] : methods) {
            out.per_cell[cell][method] = median(gaps);
        }
    }
    return out;
}

} // namespace datasim
