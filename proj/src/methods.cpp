#include "datasim/methods.hpp"

#include "datasim/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace datasim {

std::string MethodSpec::label() const {
    std::ostringstream ss;
    ss << id;
    if (is_edge_count()) {
        ss << "-" << graph.label();
        if (id == "zc") ss << "-k" << kappa;
    } else if (id == "hmn") {
        ss << (oob_mode == OobMode::PerClass ? "-perclass" : "-overall");
    } else if (id == "cm") {
        ss << (cm_mode == CovMode::Enumerate ? "-enum" : "-closed");
    } else if (id == "otdd") {
        ss << (otdd_params.mode == OtddMode::Sinkhorn ? "-sinkhorn" : "-exact");
    } else if (id == "ggrl") {
        ss << (ggrl_f == GgrlDiff::Absolute ? "-fa" : "-fs");
        ss << (ggrl_g == GgrlAgg::Sum ? "-sum" : "-max");
        if (ggrl_tune) ss << "-tuned";
    }
    return ss.str();
}

MethodSpec MethodSpec::parse(const std::string& method, const std::string& graph_override) {
    MethodSpec spec;
    std::string base = method;

    auto strip_suffix = [&](const std::string& suffix) {
        if (base.size() > suffix.size() &&
            base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
            base = base.substr(0, base.size() - suffix.size());
            return true;
        }
        return false;
    };

    if (base == "c2st-knn" || base == "c2st-nn" || base == "hmn" || base == "ymrzl" ||
        base == "petrie" || base == "mmcm" || base == "cm" || base == "ggrl" || base == "otdd" ||
        base == "fr" || base == "cf" || base == "ccs" || base == "zc") {
        spec.id = base;
    } else if (strip_suffix("-overall") && base == "hmn") {
        spec.id = "hmn";
        spec.oob_mode = OobMode::Overall;
    } else if (base == "hmn-perclass") {
        spec.id = "hmn";
        spec.oob_mode = OobMode::PerClass;
    } else if (base == "cm-enum") {
        spec.id = "cm";
        spec.cm_mode = CovMode::Enumerate;
    } else if (base == "cm-closed") {
        spec.id = "cm";
        spec.cm_mode = CovMode::ClosedForm;
    } else if (base == "otdd-exact") {
        spec.id = "otdd";
        spec.otdd_params.mode = OtddMode::Exact;
    } else if (base == "otdd-sinkhorn") {
        spec.id = "otdd";
        spec.otdd_params.mode = OtddMode::Sinkhorn;
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }

    if (spec.is_edge_count()) {
        spec.metric = Metric::Hamming;
        if (!graph_override.empty()) spec.graph = parse_graph_spec(graph_override);
    } else if (spec.id == "petrie" || spec.id == "mmcm") {
        spec.metric = Metric::EuclideanDummy;
    }
    validate_method(spec);
    return spec;
}

void validate_method(const MethodSpec& spec) {
    if (spec.id == "zc" && !zc_kappa_admissible(spec.kappa)) {
        throw std::invalid_argument("zc kappa must be one of 1, 1.14, 1.31");
    }
    if (spec.is_edge_count() && spec.graph.k < 1) {
        throw std::invalid_argument("graph k must be >= 1");
    }
    if (spec.id == "hmn" && spec.trees < 1) {
        throw std::invalid_argument("hmn needs trees >= 1");
    }
    if ((spec.id == "c2st-knn" || spec.id == "c2st-nn" || spec.id == "ymrzl") &&
        (spec.split_fraction <= 0.0 || spec.split_fraction >= 1.0)) {
        throw std::invalid_argument("split fraction must be in (0,1)");
    }
    if (spec.id == "otdd" && spec.otdd_params.sinkhorn_eps <= 0.0) {
        throw std::invalid_argument("sinkhorn epsilon must be positive");
    }
}

SimilarityOutcome evaluate_method(const MethodSpec& spec,
                                  const std::vector<CategoricalDataset>& datasets,
                                  std::uint64_t seed) {
    if (datasets.size() < 2) {
        return SimilarityOutcome::error("need at least 2 datasets", Direction::LowMeansSimilar);
    }

    if (spec.needs_target()) {
        if (datasets.size() != 2) {
            return SimilarityOutcome::error("two datasets required", Direction::LowMeansSimilar);
        }
        if (spec.id == "ggrl") {
            return ggrl(datasets[0], datasets[1], spec.ggrl_f, spec.ggrl_g, spec.ggrl_tune, seed);
        }
        return otdd(datasets[0], datasets[1], spec.otdd_params);
    }
    if (spec.id == "cm") {
        if (datasets.size() != 2) {
            return SimilarityOutcome::error("two datasets required", Direction::LowMeansSimilar);
        }
        return cm_distance(datasets[0], datasets[1], spec.cm_mode);
    }

    // Pooled-sample methods work on the covariates only.
    std::vector<CategoricalDataset> plain;
    plain.reserve(datasets.size());
    for (const auto& d : datasets) plain.push_back(d.has_target() ? d.without_target() : d);
    PooledSample pooled;
    try {
        pooled = pool(plain);
    } catch (const std::exception& e) {
        return SimilarityOutcome::error(e.what(), Direction::LowMeansSimilar);
    }

    if (spec.id == "fr") return fr_statistic(pooled, spec.graph, spec.metric, seed);
    if (spec.id == "ccs") return ccs_statistic(pooled, spec.graph, spec.metric, seed);
    if (spec.id == "cf") return cf_statistic(pooled, spec.graph, spec.metric, seed);
    if (spec.id == "zc") return zc_statistic(pooled, spec.graph, spec.metric, spec.kappa, seed);
    if (spec.id == "petrie") return petrie_statistic(pooled, spec.metric, spec.policy);
    if (spec.id == "mmcm") return mmcm_statistic(pooled, spec.metric, spec.policy);
    if (spec.id == "c2st-knn") return c2st(pooled, C2stClassifier::Knn, spec.split_fraction, seed);
    if (spec.id == "c2st-nn") return c2st(pooled, C2stClassifier::Mlp, spec.split_fraction, seed);
    if (spec.id == "ymrzl") return ymrzl(pooled, spec.split_fraction, seed);
    if (spec.id == "hmn") return hmn(pooled, spec.oob_mode, spec.trees, seed);
    return SimilarityOutcome::error("unknown method id: " + spec.id, Direction::LowMeansSimilar);
}

std::vector<MethodSpec> default_method_menu(bool with_target_methods) {
    std::vector<MethodSpec> menu;
    const char* graphs[] = {"1nn-u", "5mst-u", "5nn-a"};
    for (const char* id : {"fr", "cf", "ccs", "zc"}) {
        for (const char* g : graphs) {
            menu.push_back(MethodSpec::parse(id, g));
        }
    }
    menu.push_back(MethodSpec::parse("c2st-knn"));
    menu.push_back(MethodSpec::parse("c2st-nn"));
    menu.push_back(MethodSpec::parse("hmn"));
    menu.push_back(MethodSpec::parse("ymrzl"));
    menu.push_back(MethodSpec::parse("petrie"));
    menu.push_back(MethodSpec::parse("mmcm"));
    menu.push_back(MethodSpec::parse("cm"));
    if (with_target_methods) {
        menu.push_back(MethodSpec::parse("ggrl"));
        menu.push_back(MethodSpec::parse("otdd"));
    }
    return menu;
}

} // namespace datasim
