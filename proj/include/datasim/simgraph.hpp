#pragma once

#include "datasim/dataset.hpp"
#include "datasim/distance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace datasim {

enum class GraphKind { MST, NN };
enum class TieMode { Union, Average };

struct GraphSpec {
    GraphKind kind = GraphKind::NN;
    int k = 1;
    TieMode tie_mode = TieMode::Union;
    int average_mst_draws = 64;

    std::string label() const;
};

// Parses "1nn-u", "5mst-u", "5nn-a", ...
GraphSpec parse_graph_spec(const std::string& s);

struct WeightedEdge {
    int u;
    int v;
    double w;
};

// Similarity graph over observations. Categorical data is heavily tied, so
// construction happens on the distinct values (zero-distance classes) and is
// expanded back to observations: identical observations are always linked,
// and a value-level edge (u,v) is realized by representative pairs.
//
// Union mode: every expanded edge has weight 1 (edges of all optimal
// graphs). Average mode: weights are inclusion frequencies over the optimal
// graphs (within-class pairs carry the spanning-tree frequency, cross pairs
// carry the value-edge weight split over the m_u*m_v candidate pairs).
struct SimilarityGraph {
    std::size_t nodes = 0;
    std::vector<WeightedEdge> edges;
    GraphSpec spec;
    Metric metric = Metric::Hamming;
    bool layer_disconnected = false;

    // Distinct-value view (for diagnostics and oracle tests).
    std::vector<std::vector<int>> value_members;
    std::vector<WeightedEdge> value_edges;

    double total_weight() const;
};

SimilarityGraph knn_graph(const DistanceMatrix& D, int k, TieMode tie_mode);
SimilarityGraph kmst_graph(const DistanceMatrix& D, int k, TieMode tie_mode, int draws = 64,
                           std::uint64_t seed = 0x6d737464726177ULL);
SimilarityGraph build_graph(const DistanceMatrix& D, const GraphSpec& spec,
                            std::uint64_t seed = 0x6d737464726177ULL);

void write_edges_csv(const SimilarityGraph& g, const std::string& path);

// Two-sample edge counts; weighted in Average mode, integral in Union mode.
struct EdgeCounts {
    double between = 0.0;  // R
    double within1 = 0.0;  // R_1
    double within2 = 0.0;  // R_2
    double total = 0.0;    // |G| (total edge weight)
};

EdgeCounts edge_counts(const SimilarityGraph& g, const std::vector<int>& membership);

// Permutation-null moments of (R, R_1, R_2) for a fixed (weighted) graph.
// var_scale_* carry the magnitude of the cancelling terms so callers can
// apply a relative zero test.
struct NullMoments {
    double e_r = 0.0, e_r1 = 0.0, e_r2 = 0.0;
    double var_r = 0.0, var_r1 = 0.0, var_r2 = 0.0, cov_r12 = 0.0;
    double var_scale_r = 0.0, var_scale_r1 = 0.0, var_scale_r2 = 0.0, cov_scale = 0.0;
    bool clamped = false;
};

// Throws std::invalid_argument("moment-degeneracy") when n1+n2 < 4.
NullMoments null_moments(const SimilarityGraph& g, std::size_t n1, std::size_t n2);

// Relative threshold for declaring a null variance zero; slightly negative
// computed variances are treated as zero as well.
inline constexpr double kEpsVar = 1e-9;
bool variance_is_zero(double var, double scale);

// The four edge-count tests on a pooled two-sample.
SimilarityOutcome fr_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               std::uint64_t seed = 0x6d737464726177ULL);
SimilarityOutcome ccs_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                                std::uint64_t seed = 0x6d737464726177ULL);
SimilarityOutcome cf_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               std::uint64_t seed = 0x6d737464726177ULL);
SimilarityOutcome zc_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               double kappa, std::uint64_t seed = 0x6d737464726177ULL);

// Same statistics on a prebuilt graph (lets callers reuse one graph).
SimilarityOutcome fr_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2);
SimilarityOutcome ccs_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                                std::size_t n1, std::size_t n2);
SimilarityOutcome cf_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2);
SimilarityOutcome zc_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2, double kappa);

inline constexpr double kZcDefaultKappa = 1.14;
bool zc_kappa_admissible(double kappa);

} // namespace datasim
