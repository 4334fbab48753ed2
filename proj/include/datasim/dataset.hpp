#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace datasim {

using Code = std::int32_t;

// Integer-coded categorical data: n rows, p columns, codes in [0, arities[j]).
// Immutable after construction; an optional binary target column is kept
// separate from the covariates.
class CategoricalDataset {
public:
    CategoricalDataset() = default;
    CategoricalDataset(std::vector<Code> values, std::size_t n, std::size_t p,
                       std::vector<Code> arities,
                       std::optional<std::vector<Code>> target = std::nullopt);

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return p_; }
    Code at(std::size_t i, std::size_t j) const { return values_[i * p_ + j]; }
    const Code* row(std::size_t i) const { return values_.data() + i * p_; }
    const std::vector<Code>& values() const { return values_; }
    const std::vector<Code>& arities() const { return arities_; }
    bool has_target() const { return target_.has_value(); }
    const std::vector<Code>& target() const { return *target_; }

    CategoricalDataset without_target() const;
    CategoricalDataset with_target(std::vector<Code> target) const;

    // Total dummy-encoding width, sum over columns of (arity - 1).
    std::size_t dummy_width() const;

private:
    std::vector<Code> values_;
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::vector<Code> arities_;
    std::optional<std::vector<Code>> target_;
};

// Row-concatenation of k datasets sharing arities. Membership labels are
// 1-based (1..k) to match the usual sample indexing.
struct PooledSample {
    CategoricalDataset data;
    std::vector<int> membership;
    std::vector<std::size_t> sizes;

    std::size_t total() const { return data.rows(); }
    std::size_t samples() const { return sizes.size(); }
};

PooledSample pool(const std::vector<CategoricalDataset>& datasets);

// Splits a pooled sample back into its member datasets (inverse of pool).
std::vector<CategoricalDataset> split(const PooledSample& pooled);

enum class Direction { HighMeansSimilar, LowMeansSimilar };

enum class Status { Ok, Undefined, Infeasible, Error };

// Every statistic returns one of these: a finite value plus direction when
// Ok, otherwise a machine-readable failure reason. Diagnostics carry
// method-specific numbers (edge counts, cross counts, flags).
struct SimilarityOutcome {
    double statistic = 0.0;
    Direction direction = Direction::LowMeansSimilar;
    std::optional<double> p_value;
    std::map<std::string, double> diagnostics;
    Status status = Status::Ok;
    std::string reason;

    bool ok() const { return status == Status::Ok; }

    static SimilarityOutcome undefined(std::string why, Direction dir) {
        SimilarityOutcome o;
        o.status = Status::Undefined;
        o.reason = std::move(why);
        o.direction = dir;
        o.statistic = std::numeric_limits<double>::quiet_NaN();
        return o;
    }
    static SimilarityOutcome infeasible(std::string why, Direction dir) {
        SimilarityOutcome o;
        o.status = Status::Infeasible;
        o.reason = std::move(why);
        o.direction = dir;
        o.statistic = std::numeric_limits<double>::quiet_NaN();
        return o;
    }
    static SimilarityOutcome error(std::string why, Direction dir) {
        SimilarityOutcome o;
        o.status = Status::Error;
        o.reason = std::move(why);
        o.direction = dir;
        o.statistic = std::numeric_limits<double>::quiet_NaN();
        return o;
    }
};

const char* to_string(Status s);
const char* to_string(Direction d);

} // namespace datasim
