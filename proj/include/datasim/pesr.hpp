#pragma once

#include "datasim/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace datasim {

// Share of repetitions excluded before a cell's PESR is set to missing.
inline constexpr double kExclusionFraction = 0.2;

struct PesrResult {
    std::optional<double> pesr;
    double mcse = 0.0;
    std::size_t n_valid = 0;
    std::size_t n_missing = 0;
    double threshold = 0.0;
};

// Proportion of alternative repetitions strictly more extreme than the
// null-scenario order-statistic threshold (95% upper for low-means-similar,
// 5% lower for high-means-similar). Non-finite entries count as missing.
PesrResult pesr(const std::vector<double>& null_stats, const std::vector<double>& alt_stats,
                Direction direction);

// Order-statistic thresholds on the sorted valid null statistics.
double upper_threshold(std::vector<double> valid_null);
double lower_threshold(std::vector<double> valid_null);

// Share of valid p-values below alpha.
double asymptotic_power(const std::vector<double>& p_values, double alpha);

struct PesrRecord {
    std::string scenario_id;
    std::string method_id;
    // Grid coordinates used by the gap aggregation.
    int k = 2;
    std::size_t total_n = 0;
    std::size_t p = 0;
    Code arity = 2;
    std::string balance;
    std::string family;
    double delta = 0.0;
    std::string grouping;
    std::optional<double> pesr;
    double mcse = 0.0;
    std::size_t n_valid = 0;
    std::size_t n_missing = 0;
};

struct GapSummary {
    // medians of per-scenario gaps to the best method
    std::map<std::string, double> overall;                       // method -> median gap
    std::map<std::string, std::map<std::string, double>> per_cell;  // cell key -> method -> median
};

// Per alternative scenario, gap = best PESR - method PESR (missing -> 1);
// medians per (balance, arity, p) cell and overall.
GapSummary gap_to_best(const std::vector<PesrRecord>& records);

} // namespace datasim
