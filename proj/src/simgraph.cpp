#include "datasim/simgraph.hpp"

#include "datasim/rng.hpp"
#include "datasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

namespace datasim {

namespace {

// Disjoint-set over value ids.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

// Groups observations into zero-distance classes.
struct Contraction {
    std::vector<int> value_of;                 // observation -> value id
    std::vector<std::vector<int>> members;     // value id -> observations
    std::vector<int> rep;                      // value id -> representative observation
    std::vector<double> dist;                  // K x K value distances
    int K = 0;

    double d(int u, int v) const { return dist[static_cast<std::size_t>(u) * K + v]; }
};

Contraction contract(const DistanceMatrix& D) {
    const int n = static_cast<int>(D.size());
    Dsu dsu(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (D.at(i, j) == 0.0) dsu.unite(i, j);
        }
    }
    Contraction c;
    c.value_of.assign(n, -1);
    std::map<int, int> id_of_root;
    for (int i = 0; i < n; ++i) {
        const int r = dsu.find(i);
        auto it = id_of_root.find(r);
        int id;
        if (it == id_of_root.end()) {
            id = static_cast<int>(c.members.size());
            id_of_root.emplace(r, id);
            c.members.emplace_back();
            c.rep.push_back(i);
        } else {
            id = it->second;
        }
        c.value_of[i] = id;
        c.members[id].push_back(i);
    }
    c.K = static_cast<int>(c.members.size());
    c.dist.assign(static_cast<std::size_t>(c.K) * c.K, 0.0);
    for (int u = 0; u < c.K; ++u) {
        for (int v = u + 1; v < c.K; ++v) {
            const double d = D.at(c.rep[u], c.rep[v]);
            c.dist[static_cast<std::size_t>(u) * c.K + v] = d;
            c.dist[static_cast<std::size_t>(v) * c.K + u] = d;
        }
    }
    return c;
}

// Expands value-level structure to the observation graph.
void expand(SimilarityGraph& g, const Contraction& c, TieMode mode, int k) {
    for (int u = 0; u < c.K; ++u) {
        const auto& mem = c.members[u];
        const int m = static_cast<int>(mem.size());
        if (m < 2) continue;
        const double w = (mode == TieMode::Union)
                             ? 1.0
                             : std::min(1.0, 2.0 * static_cast<double>(k) / static_cast<double>(m));
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                g.edges.push_back({mem[a], mem[b], w});
            }
        }
    }
    for (const auto& ve : g.value_edges) {
        const auto& mu = c.members[ve.u];
        const auto& mv = c.members[ve.v];
        const double denom = static_cast<double>(mu.size()) * static_cast<double>(mv.size());
        const double w = (mode == TieMode::Union) ? 1.0 : ve.w / denom;
        for (int a : mu) {
            for (int b : mv) {
                g.edges.push_back({std::min(a, b), std::max(a, b), w});
            }
        }
    }
    g.value_members = c.members;
}

// Per-value slot weights for the kNN selection: 1 for values strictly inside
// the k-th rank, s/t for values tied at the boundary.
std::vector<double> knn_directed_weights(const Contraction& c, int u, int k) {
    std::vector<double> w(c.K, 0.0);
    std::vector<std::pair<double, int>> others;
    others.reserve(c.K - 1);
    for (int v = 0; v < c.K; ++v) {
        if (v != u) others.emplace_back(c.d(u, v), v);
    }
    if (others.empty()) return w;
    if (static_cast<int>(others.size()) <= k) {
        for (auto& [d, v] : others) w[v] = 1.0;
        return w;
    }
    std::sort(others.begin(), others.end());
    const double dk = others[static_cast<std::size_t>(k - 1)].first;
    int forced = 0;
    int tied = 0;
    for (auto& [d, v] : others) {
        if (d < dk) ++forced;
        else if (d == dk) ++tied;
    }
    const double share = static_cast<double>(k - forced) / static_cast<double>(tied);
    for (auto& [d, v] : others) {
        if (d < dk) w[v] = 1.0;
        else if (d == dk) w[v] = share;
    }
    return w;
}

// One layer of union-mode MST edges on the candidate set: an edge qualifies
// for some optimal spanning structure iff its endpoints are in different
// components of the strictly-lighter subgraph. Returns qualifying edges and
// whether the candidate graph is disconnected.
struct LayerResult {
    std::vector<std::pair<int, int>> edges;
    bool disconnected = false;
    bool empty = false;
};

LayerResult union_layer(const Contraction& c, const std::vector<int>& used,
                        const std::vector<long long>& cap) {
    const int K = c.K;
    std::vector<std::tuple<double, int, int>> cand;
    for (int u = 0; u < K; ++u) {
        for (int v = u + 1; v < K; ++v) {
            const std::size_t idx = static_cast<std::size_t>(u) * K + v;
            if (used[idx] < cap[idx]) cand.emplace_back(c.d(u, v), u, v);
        }
    }
    LayerResult res;
    if (cand.empty()) {
        res.empty = true;
        res.disconnected = true;
        return res;
    }
    std::sort(cand.begin(), cand.end());
    Dsu dsu(K);
    std::size_t i = 0;
    while (i < cand.size()) {
        std::size_t j = i;
        while (j < cand.size() && std::get<0>(cand[j]) == std::get<0>(cand[i])) ++j;
        // Qualify against the strictly lighter subgraph, then merge the class.
        for (std::size_t t = i; t < j; ++t) {
            const int u = std::get<1>(cand[t]);
            const int v = std::get<2>(cand[t]);
            if (dsu.find(u) != dsu.find(v)) res.edges.emplace_back(u, v);
        }
        for (std::size_t t = i; t < j; ++t) {
            dsu.unite(std::get<1>(cand[t]), std::get<2>(cand[t]));
        }
        i = j;
    }
    int roots = 0;
    for (int u = 0; u < K; ++u) {
        if (dsu.find(u) == u) ++roots;
    }
    res.disconnected = roots > 1;
    return res;
}

// Uniform spanning forest of the candidate multigraph, one weight class at a
// time (every minimum spanning structure uses a maximal forest per class).
// Within a class, Wilson's loop-erased walk samples each component's tree
// with probability proportional to the product of edge multiplicities, which
// matches uniform sampling over observation-level optimal structures.
std::vector<std::pair<int, int>> sample_msf(const Contraction& c, const std::vector<int>& used,
                                            const std::vector<long long>& cap, Rng& rng,
                                            bool* disconnected) {
    const int K = c.K;
    std::vector<std::tuple<double, int, int, long long>> cand;
    for (int u = 0; u < K; ++u) {
        for (int v = u + 1; v < K; ++v) {
            const std::size_t idx = static_cast<std::size_t>(u) * K + v;
            const long long slots = cap[idx] - used[idx];
            if (slots > 0) cand.emplace_back(c.d(u, v), u, v, slots);
        }
    }
    std::vector<std::pair<int, int>> chosen;
    if (cand.empty()) {
        if (disconnected) *disconnected = true;
        return chosen;
    }
    std::sort(cand.begin(), cand.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });

    Dsu dsu(K);
    std::size_t i = 0;
    while (i < cand.size()) {
        std::size_t j = i;
        while (j < cand.size() && std::get<0>(cand[j]) == std::get<0>(cand[i])) ++j;

        // Contracted multigraph of this weight class: nodes are DSU roots.
        std::map<int, int> node_id;
        std::vector<int> id_to_root;
        auto id_of = [&](int root) {
            auto it = node_id.find(root);
            if (it != node_id.end()) return it->second;
            const int id = static_cast<int>(id_to_root.size());
            node_id.emplace(root, id);
            id_to_root.push_back(root);
            return id;
        };
        struct Arc {
            int to;
            long long mult;
            int orig_u, orig_v;
        };
        std::vector<std::vector<Arc>> adj;
        for (std::size_t t = i; t < j; ++t) {
            const int ru = dsu.find(std::get<1>(cand[t]));
            const int rv = dsu.find(std::get<2>(cand[t]));
            if (ru == rv) continue;
            const int a = id_of(ru);
            const int b = id_of(rv);
            if (static_cast<int>(adj.size()) < static_cast<int>(node_id.size())) {
                adj.resize(node_id.size());
            }
            adj[a].push_back({b, std::get<3>(cand[t]), std::get<1>(cand[t]), std::get<2>(cand[t])});
            adj[b].push_back({a, std::get<3>(cand[t]), std::get<1>(cand[t]), std::get<2>(cand[t])});
        }
        const int H = static_cast<int>(node_id.size());
        if (H > 0) {
            adj.resize(H);
            // Components of the class graph.
            std::vector<int> comp(H, -1);
            int ncomp = 0;
            for (int s = 0; s < H; ++s) {
                if (comp[s] >= 0) continue;
                std::vector<int> stack{s};
                comp[s] = ncomp;
                while (!stack.empty()) {
                    const int x = stack.back();
                    stack.pop_back();
                    for (const auto& a : adj[x]) {
                        if (comp[a.to] < 0) {
                            comp[a.to] = ncomp;
                            stack.push_back(a.to);
                        }
                    }
                }
                ++ncomp;
            }
            // Wilson per component, edge choice proportional to multiplicity.
            std::vector<bool> in_tree(H, false);
            std::vector<int> first_of_comp(ncomp, -1);
            for (int x = 0; x < H; ++x) {
                if (first_of_comp[comp[x]] < 0) first_of_comp[comp[x]] = x;
            }
            for (int x = 0; x < H; ++x) {
                if (first_of_comp[comp[x]] == x) in_tree[x] = true;
            }
            std::vector<int> next(H, -1);
            std::vector<const Arc*> via(H, nullptr);
            for (int s = 0; s < H; ++s) {
                if (in_tree[s]) continue;
                int x = s;
                while (!in_tree[x]) {
                    long long total = 0;
                    for (const auto& a : adj[x]) total += a.mult;
                    long long pick = static_cast<long long>(
                        rng.next_below(static_cast<std::uint64_t>(total)));
                    const Arc* sel = nullptr;
                    for (const auto& a : adj[x]) {
                        if (pick < a.mult) {
                            sel = &a;
                            break;
                        }
                        pick -= a.mult;
                    }
                    next[x] = sel->to;
                    via[x] = sel;
                    x = sel->to;
                }
                x = s;
                while (!in_tree[x]) {
                    in_tree[x] = true;
                    chosen.emplace_back(via[x]->orig_u, via[x]->orig_v);
                    x = next[x];
                }
            }
            // Merge the sampled forest into the DSU.
            for (int x = 0; x < H; ++x) {
                if (next[x] >= 0) dsu.unite(id_to_root[x], id_to_root[next[x]]);
            }
            // Nodes placed in trees without walking (component roots) are
            // already their own DSU roots; edges chosen above did the joins.
        }
        i = j;
    }
    int roots = 0;
    for (int u = 0; u < K; ++u) {
        if (dsu.find(u) == u) ++roots;
    }
    if (disconnected && roots > 1) *disconnected = true;
    return chosen;
}

} // namespace

std::string GraphSpec::label() const {
    std::string s = std::to_string(k);
    s += kind == GraphKind::NN ? "nn" : "mst";
    s += tie_mode == TieMode::Union ? "-u" : "-a";
    return s;
}

GraphSpec parse_graph_spec(const std::string& s) {
    GraphSpec spec;
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0) throw std::invalid_argument("graph spec must start with k: " + s);
    spec.k = std::stoi(s.substr(0, i));
    std::string rest = s.substr(i);
    if (rest.rfind("nn", 0) == 0) {
        spec.kind = GraphKind::NN;
        rest = rest.substr(2);
    } else if (rest.rfind("mst", 0) == 0) {
        spec.kind = GraphKind::MST;
        rest = rest.substr(3);
    } else {
        throw std::invalid_argument("graph spec kind must be nn or mst: " + s);
    }
    if (rest == "-u" || rest == "u") {
        spec.tie_mode = TieMode::Union;
    } else if (rest == "-a" || rest == "a") {
        spec.tie_mode = TieMode::Average;
    } else {
        throw std::invalid_argument("graph spec tie mode must be u or a: " + s);
    }
    if (spec.k < 1) throw std::invalid_argument("graph spec needs k >= 1");
    return spec;
}

double SimilarityGraph::total_weight() const {
    double t = 0.0;
    for (const auto& e : edges) t += e.w;
    return t;
}

SimilarityGraph knn_graph(const DistanceMatrix& D, int k, TieMode tie_mode) {
    const std::size_t n = D.size();
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<std::size_t>(k) >= n) throw std::invalid_argument("k must be < N");

    const Contraction c = contract(D);
    SimilarityGraph g;
    g.nodes = n;
    g.metric = D.metric();
    g.spec = GraphSpec{GraphKind::NN, k, tie_mode, 0};

    std::vector<std::vector<double>> dir(c.K);
    for (int u = 0; u < c.K; ++u) dir[u] = knn_directed_weights(c, u, k);
    for (int u = 0; u < c.K; ++u) {
        for (int v = u + 1; v < c.K; ++v) {
            const double a = dir[u][v];
            const double b = dir[v][u];
            if (a <= 0.0 && b <= 0.0) continue;
            const double w = (tie_mode == TieMode::Union) ? 1.0 : 1.0 - (1.0 - a) * (1.0 - b);
            g.value_edges.push_back({u, v, w});
        }
    }
    expand(g, c, tie_mode, 1);
    return g;
}

SimilarityGraph kmst_graph(const DistanceMatrix& D, int k, TieMode tie_mode, int draws,
                           std::uint64_t seed) {
    const std::size_t n = D.size();
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<std::size_t>(k) > n - 1) throw std::invalid_argument("k must be <= N-1");

    const Contraction c = contract(D);
    SimilarityGraph g;
    g.nodes = n;
    g.metric = D.metric();
    g.spec = GraphSpec{GraphKind::MST, k, tie_mode, draws};

    const int K = c.K;
    // Pair-slot capacities: a value edge can recur across layers until its
    // m_u * m_v observation pairs are exhausted.
    std::vector<long long> cap(static_cast<std::size_t>(K) * K, 0);
    for (int u = 0; u < K; ++u) {
        for (int v = u + 1; v < K; ++v) {
            const long long m =
                static_cast<long long>(c.members[u].size()) * static_cast<long long>(c.members[v].size());
            cap[static_cast<std::size_t>(u) * K + v] = m;
            cap[static_cast<std::size_t>(v) * K + u] = m;
        }
    }

    if (K == 1) {
        expand(g, c, tie_mode, k);
        return g;
    }
    if (tie_mode == TieMode::Union) {
        std::vector<int> used(static_cast<std::size_t>(K) * K, 0);
        std::vector<char> in_union(static_cast<std::size_t>(K) * K, 0);
        for (int layer = 0; layer < k; ++layer) {
            const LayerResult lr = union_layer(c, used, cap);
            if (lr.disconnected) g.layer_disconnected = true;
            if (lr.empty) break;
            for (const auto& [u, v] : lr.edges) {
                const std::size_t idx = static_cast<std::size_t>(u) * K + v;
                ++used[idx];
                ++used[static_cast<std::size_t>(v) * K + u];
                in_union[idx] = 1;
            }
        }
        for (int u = 0; u < K; ++u) {
            for (int v = u + 1; v < K; ++v) {
                if (in_union[static_cast<std::size_t>(u) * K + v]) {
                    g.value_edges.push_back({u, v, 1.0});
                }
            }
        }
    } else {
        if (draws < 1) throw std::invalid_argument("average mode needs draws >= 1");
        std::vector<double> uses(static_cast<std::size_t>(K) * K, 0.0);
        for (int s = 0; s < draws; ++s) {
            Rng rng(mix_u64(seed, static_cast<std::uint64_t>(s) + 1));
            std::vector<int> used(static_cast<std::size_t>(K) * K, 0);
            for (int layer = 0; layer < k; ++layer) {
                bool disc = false;
                const auto tree = sample_msf(c, used, cap, rng, &disc);
                if (disc) g.layer_disconnected = true;
                if (tree.empty() && K > 1) break;
                for (const auto& [u, v] : tree) {
                    ++used[static_cast<std::size_t>(u) * K + v];
                    ++used[static_cast<std::size_t>(v) * K + u];
                    uses[static_cast<std::size_t>(u) * K + v] += 1.0;
                }
            }
        }
        for (int u = 0; u < K; ++u) {
            for (int v = u + 1; v < K; ++v) {
                const double avg = uses[static_cast<std::size_t>(u) * K + v] / draws;
                if (avg > 0.0) g.value_edges.push_back({u, v, avg});
            }
        }
    }
    expand(g, c, tie_mode, k);
    return g;
}

SimilarityGraph build_graph(const DistanceMatrix& D, const GraphSpec& spec, std::uint64_t seed) {
    if (spec.kind == GraphKind::NN) {
        return knn_graph(D, spec.k, spec.tie_mode);
    }
    return kmst_graph(D, spec.k, spec.tie_mode, spec.average_mst_draws, seed);
}

void write_edges_csv(const SimilarityGraph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "u,v,weight\n";
    for (const auto& e : g.edges) {
        f << e.u << "," << e.v << "," << format_double(e.w) << "\n";
    }
}

EdgeCounts edge_counts(const SimilarityGraph& g, const std::vector<int>& membership) {
    if (membership.size() != g.nodes) {
        throw std::invalid_argument("membership length does not match node count");
    }
    EdgeCounts ec;
    for (const auto& e : g.edges) {
        const int a = membership[static_cast<std::size_t>(e.u)];
        const int b = membership[static_cast<std::size_t>(e.v)];
        ec.total += e.w;
        if (a != b) {
            ec.between += e.w;
        } else if (a == 1) {
            ec.within1 += e.w;
        } else {
            ec.within2 += e.w;
        }
    }
    return ec;
}

NullMoments null_moments(const SimilarityGraph& g, std::size_t n1, std::size_t n2) {
    const double N = static_cast<double>(n1 + n2);
    if (n1 + n2 != g.nodes) {
        throw std::invalid_argument("n1+n2 must equal node count");
    }
    if (n1 + n2 < 4) {
        throw std::invalid_argument("moment-degeneracy");
    }

    double W = 0.0;   // total edge weight
    double Q = 0.0;   // sum of squared edge weights
    std::vector<double> deg(g.nodes, 0.0);
    for (const auto& e : g.edges) {
        W += e.w;
        Q += e.w * e.w;
        deg[static_cast<std::size_t>(e.u)] += e.w;
        deg[static_cast<std::size_t>(e.v)] += e.w;
    }
    double sumdeg2 = 0.0;
    for (double d : deg) sumdeg2 += d * d;
    const double A = sumdeg2 - 2.0 * Q;      // ordered pairs of distinct edges sharing a node
    const double Dsj = W * W - Q - A;        // ordered pairs of disjoint edges

    auto p1 = [&](double n) { return n * (n - 1.0) / (N * (N - 1.0)); };
    auto p2 = [&](double n) { return n * (n - 1.0) * (n - 2.0) / (N * (N - 1.0) * (N - 2.0)); };
    auto p3 = [&](double n) {
        return n * (n - 1.0) * (n - 2.0) * (n - 3.0) / (N * (N - 1.0) * (N - 2.0) * (N - 3.0));
    };

    const double a1 = static_cast<double>(n1);
    const double a2 = static_cast<double>(n2);

    NullMoments m;
    m.e_r1 = p1(a1) * W;
    m.e_r2 = p1(a2) * W;
    m.e_r = 2.0 * a1 * a2 / (N * (N - 1.0)) * W;

    auto variance = [&](double n, double* scale) {
        const double t1 = p1(n) * Q;
        const double t2 = p2(n) * A;
        const double t3 = p3(n) * Dsj;
        const double t4 = p1(n) * W * p1(n) * W;
        *scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
        return t1 + t2 + t3 - t4;
    };
    m.var_r1 = variance(a1, &m.var_scale_r1);
    m.var_r2 = variance(a2, &m.var_scale_r2);

    const double cross = a1 * (a1 - 1.0) * a2 * (a2 - 1.0) /
                         (N * (N - 1.0) * (N - 2.0) * (N - 3.0));
    m.cov_r12 = cross * Dsj - m.e_r1 * m.e_r2;
    m.cov_scale = std::abs(cross * Dsj) + std::abs(m.e_r1 * m.e_r2);

    // R = W - R1 - R2 for any fixed graph, so its variance follows.
    m.var_r = m.var_r1 + m.var_r2 + 2.0 * m.cov_r12;
    m.var_scale_r = m.var_scale_r1 + m.var_scale_r2 + 2.0 * m.cov_scale;

    auto clamp = [&](double* v) {
        if (*v < 0.0) {
            *v = 0.0;
            m.clamped = true;
        }
    };
    clamp(&m.var_r1);
    clamp(&m.var_r2);
    clamp(&m.var_r);
    return m;
}

bool variance_is_zero(double var, double scale) {
    return var <= kEpsVar * std::max(1.0, scale);
}

namespace {

struct TwoSampleContext {
    EdgeCounts counts;
    NullMoments moments;
    std::size_t n1 = 0, n2 = 0;
    bool degenerate = false;
};

bool two_sample_sizes(const std::vector<int>& membership, std::size_t* n1, std::size_t* n2) {
    std::size_t a = 0, b = 0;
    for (int m : membership) {
        if (m == 1) ++a;
        else if (m == 2) ++b;
        else return false;
    }
    *n1 = a;
    *n2 = b;
    return true;
}

SimilarityOutcome make_context(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2, Direction dir,
                               TwoSampleContext* ctx) {
    if (n1 + n2 != g.nodes || n1 == 0 || n2 == 0) {
        return SimilarityOutcome::error("two-sample membership required", dir);
    }
    if (g.nodes < 4) {
        return SimilarityOutcome::undefined("moment-degeneracy", dir);
    }
    ctx->counts = edge_counts(g, membership);
    ctx->moments = null_moments(g, n1, n2);
    ctx->n1 = n1;
    ctx->n2 = n2;
    SimilarityOutcome ok;
    ok.direction = dir;
    ok.diagnostics["R"] = ctx->counts.between;
    ok.diagnostics["R1"] = ctx->counts.within1;
    ok.diagnostics["R2"] = ctx->counts.within2;
    ok.diagnostics["G"] = ctx->counts.total;
    if (g.layer_disconnected) ok.diagnostics["layer_disconnected"] = 1.0;
    return ok;
}

} // namespace

SimilarityOutcome fr_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2) {
    TwoSampleContext ctx;
    SimilarityOutcome out = make_context(g, membership, n1, n2, Direction::HighMeansSimilar, &ctx);
    if (!out.ok()) return out;
    const auto& m = ctx.moments;
    if (variance_is_zero(m.var_r, m.var_scale_r)) {
        auto u = SimilarityOutcome::undefined("null-variance-zero", Direction::HighMeansSimilar);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double z = (ctx.counts.between - m.e_r) / std::sqrt(m.var_r);
    out.statistic = z;
    out.p_value = normal_cdf(z);  // rejects for few between-sample edges
    return out;
}

SimilarityOutcome ccs_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                                std::size_t n1, std::size_t n2) {
    TwoSampleContext ctx;
    SimilarityOutcome out = make_context(g, membership, n1, n2, Direction::LowMeansSimilar, &ctx);
    if (!out.ok()) return out;
    const auto& m = ctx.moments;
    const double N = static_cast<double>(n1 + n2);
    const double a = static_cast<double>(n1) / N;
    const double b = static_cast<double>(n2) / N;
    const double rw = a * ctx.counts.within1 + b * ctx.counts.within2;
    const double e = a * m.e_r1 + b * m.e_r2;
    const double var = a * a * m.var_r1 + b * b * m.var_r2 + 2.0 * a * b * m.cov_r12;
    const double scale =
        a * a * m.var_scale_r1 + b * b * m.var_scale_r2 + 2.0 * a * b * m.cov_scale;
    if (variance_is_zero(var, scale)) {
        auto u = SimilarityOutcome::undefined("null-variance-zero", Direction::LowMeansSimilar);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double z = (rw - e) / std::sqrt(var);
    out.statistic = z;
    out.diagnostics["Rw"] = rw;
    out.p_value = 1.0 - normal_cdf(z);  // rejects for many within-sample edges
    return out;
}

SimilarityOutcome cf_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2) {
    TwoSampleContext ctx;
    SimilarityOutcome out = make_context(g, membership, n1, n2, Direction::LowMeansSimilar, &ctx);
    if (!out.ok()) return out;
    const auto& m = ctx.moments;
    const double d1 = ctx.counts.within1 - m.e_r1;
    const double d2 = ctx.counts.within2 - m.e_r2;
    const double det = m.var_r1 * m.var_r2 - m.cov_r12 * m.cov_r12;
    const double det_scale =
        std::max(1.0, std::abs(m.var_r1 * m.var_r2) + m.cov_r12 * m.cov_r12);
    if (variance_is_zero(m.var_r1, m.var_scale_r1) || variance_is_zero(m.var_r2, m.var_scale_r2) ||
        det <= kEpsVar * det_scale) {
        auto u = SimilarityOutcome::undefined("covariance-singular", Direction::LowMeansSimilar);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double stat =
        (d1 * d1 * m.var_r2 - 2.0 * d1 * d2 * m.cov_r12 + d2 * d2 * m.var_r1) / det;
    out.statistic = stat;
    out.p_value = chi_square_upper_tail(stat, 2.0);
    return out;
}

bool zc_kappa_admissible(double kappa) {
    return kappa == 1.0 || kappa == 1.14 || kappa == 1.31;
}

SimilarityOutcome zc_statistic(const SimilarityGraph& g, const std::vector<int>& membership,
                               std::size_t n1, std::size_t n2, double kappa) {
    TwoSampleContext ctx;
    SimilarityOutcome out = make_context(g, membership, n1, n2, Direction::LowMeansSimilar, &ctx);
    if (!out.ok()) return out;
    const auto& m = ctx.moments;
    const double N = static_cast<double>(n1 + n2);
    const double a = static_cast<double>(n1) / N;
    const double b = static_cast<double>(n2) / N;

    const double rw = a * ctx.counts.within1 + b * ctx.counts.within2;
    const double ew = a * m.e_r1 + b * m.e_r2;
    const double var_w = a * a * m.var_r1 + b * b * m.var_r2 + 2.0 * a * b * m.cov_r12;
    const double scale_w =
        a * a * m.var_scale_r1 + b * b * m.var_scale_r2 + 2.0 * a * b * m.cov_scale;

    const double rd = ctx.counts.within1 - ctx.counts.within2;
    const double ed = m.e_r1 - m.e_r2;
    const double var_d = m.var_r1 + m.var_r2 - 2.0 * m.cov_r12;
    const double scale_d = m.var_scale_r1 + m.var_scale_r2 + 2.0 * m.cov_scale;

    if (variance_is_zero(var_w, scale_w) || variance_is_zero(var_d, scale_d)) {
        auto u = SimilarityOutcome::undefined("null-variance-zero", Direction::LowMeansSimilar);
        u.diagnostics = out.diagnostics;
        return u;
    }
    const double zw = (rw - ew) / std::sqrt(var_w);
    const double zd = (rd - ed) / std::sqrt(var_d);
    const double stat = std::max(kappa * zw, std::abs(zd));
    out.statistic = stat;
    out.diagnostics["Zw"] = zw;
    out.diagnostics["Zd"] = zd;
    // Asymptotic tail treating the two standardized parts as independent.
    const double pw = normal_cdf(stat / kappa);
    const double pd = normal_cdf(stat) - normal_cdf(-stat);
    out.p_value = 1.0 - pw * std::max(0.0, pd);
    return out;
}

namespace {

template <typename F>
SimilarityOutcome pooled_edge_test(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                                   std::uint64_t seed, Direction dir, F&& f) {
    if (pooled.samples() != 2) {
        return SimilarityOutcome::error("two samples required", dir);
    }
    const DistanceMatrix D = distance_matrix(pooled, metric);
    SimilarityGraph g;
    try {
        g = build_graph(D, spec, seed);
    } catch (const std::exception& e) {
        return SimilarityOutcome::error(e.what(), dir);
    }
    return f(g, pooled.membership, pooled.sizes[0], pooled.sizes[1]);
}

} // namespace

SimilarityOutcome fr_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               std::uint64_t seed) {
    return pooled_edge_test(pooled, spec, metric, seed, Direction::HighMeansSimilar,
                            [](const SimilarityGraph& g, const std::vector<int>& mem, std::size_t n1,
                               std::size_t n2) { return fr_statistic(g, mem, n1, n2); });
}

SimilarityOutcome ccs_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                                std::uint64_t seed) {
    return pooled_edge_test(pooled, spec, metric, seed, Direction::LowMeansSimilar,
                            [](const SimilarityGraph& g, const std::vector<int>& mem, std::size_t n1,
                               std::size_t n2) { return ccs_statistic(g, mem, n1, n2); });
}

SimilarityOutcome cf_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               std::uint64_t seed) {
    return pooled_edge_test(pooled, spec, metric, seed, Direction::LowMeansSimilar,
                            [](const SimilarityGraph& g, const std::vector<int>& mem, std::size_t n1,
                               std::size_t n2) { return cf_statistic(g, mem, n1, n2); });
}

SimilarityOutcome zc_statistic(const PooledSample& pooled, const GraphSpec& spec, Metric metric,
                               double kappa, std::uint64_t seed) {
    if (!zc_kappa_admissible(kappa)) {
        return SimilarityOutcome::error("kappa must be one of 1, 1.14, 1.31",
                                        Direction::LowMeansSimilar);
    }
    return pooled_edge_test(pooled, spec, metric, seed, Direction::LowMeansSimilar,
                            [kappa](const SimilarityGraph& g, const std::vector<int>& mem,
                                    std::size_t n1, std::size_t n2) {
                                return zc_statistic(g, mem, n1, n2, kappa);
                            });
}

} // namespace datasim
