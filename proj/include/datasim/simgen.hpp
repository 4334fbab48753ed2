#pragma once

#include "datasim/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace datasim {

enum class DeviationFamily { Null, BinaryShift, Skewed, OneUpOneDown };
enum class Grouping { ThreePlusOne, TwoPlusTwo, TwoPlusOnePlusOne, OnePlusOnePlusOnePlusOne };
enum class OgmVariant { None, True, WrongSign, WrongSize, WrongCoef };
enum class Balance { Balanced, Unbalanced };

// One cell of the simulation grid. k=2 uses sizes (pi*N, (1-pi)*N) with
// pi in {0.2, 0.5}; k=4 uses equal quarters or (0.1,0.2,0.3,0.4)*N.
struct ScenarioSpec {
    int k = 2;
    std::size_t total_n = 100;
    std::size_t p = 2;
    Code arity = 2;
    Balance balance = Balance::Balanced;
    DeviationFamily family = DeviationFamily::Null;
    double delta = 0.0;
    Grouping grouping = Grouping::ThreePlusOne;  // k = 4 only
    OgmVariant ogm = OgmVariant::None;
    // The k=2 scenario table lists the one-up-one-down weights with the
    // fourth down and fifth up; the figure convention (fourth up, fifth
    // down) is the default and this flag selects the table variant.
    bool one_up_one_down_table_order = false;

    std::vector<std::size_t> sizes() const;
    void validate() const;
    std::string id() const;
    std::uint64_t hash() const;
};

struct WeightVector {
    std::vector<double> weights;
    std::vector<double> probabilities() const;
};

// Per-dataset class weights for a scenario; dataset_index is 0-based.
WeightVector weights_for(const ScenarioSpec& spec, std::size_t dataset_index);

// Deterministic generation: a pure function of (spec, master seed,
// repetition); any repetition regenerates in isolation.
std::vector<CategoricalDataset> generate(const ScenarioSpec& spec, std::uint64_t master_seed,
                                         std::uint64_t repetition);

// Logistic outcome models on dummy-coded covariates, k=2 only. The variant
// applies to the second dataset; the first always uses the true model.
std::vector<CategoricalDataset> attach_target(const std::vector<CategoricalDataset>& datasets,
                                              OgmVariant variant, std::uint64_t master_seed,
                                              std::uint64_t scenario_hash, std::uint64_t repetition);

// Linear predictor of the given model variant at one dummy-coded row.
double ogm_eta(const std::vector<double>& dummy_row, OgmVariant variant, bool deviating_dataset);

const char* to_string(DeviationFamily f);
const char* to_string(Grouping g);
const char* to_string(OgmVariant v);
const char* to_string(Balance b);

DeviationFamily family_from_string(const std::string& s);
Grouping grouping_from_string(const std::string& s);
OgmVariant ogm_from_string(const std::string& s);
Balance balance_from_string(const std::string& s);

} // namespace datasim
