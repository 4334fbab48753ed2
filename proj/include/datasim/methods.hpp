#pragma once

#include "datasim/cmdist.hpp"
#include "datasim/crossmatch.hpp"
#include "datasim/dataset.hpp"
#include "datasim/ggrl.hpp"
#include "datasim/classifier.hpp"
#include "datasim/otdd.hpp"
#include "datasim/simgraph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace datasim {

// A fully parameterized method instance; label() is its stable identity in
// result tables.
struct MethodSpec {
    std::string id;  // fr cf ccs zc c2st-knn c2st-nn hmn ymrzl petrie mmcm cm ggrl otdd
    GraphSpec graph{GraphKind::NN, 1, TieMode::Union, 64};
    double kappa = kZcDefaultKappa;
    Metric metric = Metric::Hamming;
    OobMode oob_mode = OobMode::PerClass;
    int trees = 100;
    double split_fraction = kDefaultSplitFraction;
    MatchPolicy policy = MatchPolicy::deterministic();
    CovMode cm_mode = CovMode::ClosedForm;
    GgrlDiff ggrl_f = GgrlDiff::Absolute;
    GgrlAgg ggrl_g = GgrlAgg::Sum;
    bool ggrl_tune = false;
    OtddParams otdd_params{};

    bool needs_target() const { return id == "ggrl" || id == "otdd"; }
    bool is_edge_count() const { return id == "fr" || id == "cf" || id == "ccs" || id == "zc"; }
    std::string label() const;

    // "fr" with optional graph override, "zc" with kappa, "otdd-sinkhorn", ...
    static MethodSpec parse(const std::string& method, const std::string& graph_override = "");
};

// Validates parameters against the method's admissible set; throws on
// violations.
void validate_method(const MethodSpec& spec);

SimilarityOutcome evaluate_method(const MethodSpec& spec,
                                  const std::vector<CategoricalDataset>& datasets,
                                  std::uint64_t seed);

// The pre-selected default menu: each edge-count test with the 1NN-u,
// 5MST-u and 5NN-a graphs, both C2ST classifiers, HMN (per-class OOB),
// YMRZL, Petrie, MMCM, CM; plus GGRL and OTDD when targets are present.
std::vector<MethodSpec> default_method_menu(bool with_target_methods);

} // namespace datasim
