#pragma once

#include "datasim/methods.hpp"
#include "datasim/pesr.hpp"
#include "datasim/simgen.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace datasim {

struct RunManifest {
    std::vector<ScenarioSpec> scenarios;
    std::vector<MethodSpec> methods;
    std::size_t reps = 100;
    std::uint64_t master_seed = 42;
    std::string out_dir;
    int jobs = 1;
    double timeout_seconds = 60.0;  // 0 disables the per-triple budget
    bool resume = true;
};

struct RunRow {
    std::string scenario_id;
    std::string method_id;
    std::size_t repetition = 0;
    std::string status;  // ok | undefined | infeasible | error | timeout
    double statistic = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> p_value;
    std::string direction;
    std::string reason;
    double seconds = 0.0;
};

// Evaluates every (scenario, method, repetition) triple; failures are
// recorded, never fatal. With resume, completed triples found in the on-disk
// journal are skipped. The returned table is canonically sorted and is a
// pure function of the manifest (the seconds column aside).
std::vector<RunRow> run(const RunManifest& manifest);

void write_results_csv(const std::vector<RunRow>& rows, const std::string& path,
                       bool include_seconds);
std::vector<RunRow> read_results_csv(const std::string& path);

void write_scenarios_csv(const std::vector<ScenarioSpec>& scenarios, const std::string& path);

struct BenchResult {
    std::string method_id;
    double median_seconds = 0.0;
    double q25_seconds = 0.0;
    double q75_seconds = 0.0;
    int calls = 0;
};

// Fixed-dataset runtime benchmark: one warmup call, then at least min_reps
// calls and at least min_total_seconds of accumulated runtime per method.
std::vector<BenchResult> bench_runtime(const std::vector<MethodSpec>& methods,
                                       const ScenarioSpec& scenario, std::uint64_t seed,
                                       int min_reps = 10, double min_total_seconds = 1.0);

// Config parsing for the simulate/bench CLI: key = comma-separated values,
// expanded as a full factorial over the valid combinations.
std::vector<ScenarioSpec> expand_grid_config(const std::string& text);
std::vector<ScenarioSpec> load_grid_config(const std::string& path);

// PESR aggregation over a finished run: pairs each alternative scenario with
// the matched null scenario (same k, N, p, arity, balance) and computes one
// record per (scenario, method).
std::vector<PesrRecord> compute_pesr_records(const std::vector<RunRow>& rows,
                                             const std::vector<ScenarioSpec>& scenarios);

void write_pesr_csv(const std::vector<PesrRecord>& records, const std::string& path);
void write_gap_csv(const GapSummary& gaps, const std::string& path);
void write_pesr_plots(const std::vector<PesrRecord>& records, const std::string& dir);

} // namespace datasim
