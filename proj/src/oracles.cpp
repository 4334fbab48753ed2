#include "datasim/oracles.hpp"

#include "datasim/crossmatch.hpp"
#include "datasim/matching.hpp"
#include "datasim/rng.hpp"
#include "datasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace datasim {
namespace oracles {

namespace {

// All distinct assignments of the label multiset {1^n1, 2^n2, ...} to N slots.
void enumerate_labelings(const std::vector<std::size_t>& sizes,
                         const std::function<void(const std::vector<int>&)>& visit) {
    const std::size_t N = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<int> labels(N, 0);
    std::vector<std::size_t> remaining = sizes;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == N) {
            visit(labels);
            return;
        }
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            if (remaining[s] == 0) continue;
            --remaining[s];
            labels[pos] = static_cast<int>(s) + 1;
            rec(pos + 1);
            ++remaining[s];
        }
    };
    rec(0);
}

} // namespace

EdgeCountMoments permutation_edge_moments(const std::vector<WeightedEdge>& edges, std::size_t n1,
                                          std::size_t n2) {
    const std::size_t N = n1 + n2;
    if (N > kMaxPermutationNodes) throw std::invalid_argument("permutation oracle budget exceeded");

    double count = 0.0;
    double sr = 0, sr1 = 0, sr2 = 0;
    double srr = 0, sr1r1 = 0, sr2r2 = 0, sr1r2 = 0;
    enumerate_labelings({n1, n2}, [&](const std::vector<int>& labels) {
        double r = 0, r1 = 0, r2 = 0;
        for (const auto& e : edges) {
            const int a = labels[static_cast<std::size_t>(e.u)];
            const int b = labels[static_cast<std::size_t>(e.v)];
            if (a != b) r += e.w;
            else if (a == 1) r1 += e.w;
            else r2 += e.w;
        }
        count += 1.0;
        sr += r;
        sr1 += r1;
        sr2 += r2;
        srr += r * r;
        sr1r1 += r1 * r1;
        sr2r2 += r2 * r2;
        sr1r2 += r1 * r2;
    });

    EdgeCountMoments m;
    m.e_r = sr / count;
    m.e_r1 = sr1 / count;
    m.e_r2 = sr2 / count;
    m.var_r = srr / count - m.e_r * m.e_r;
    m.var_r1 = sr1r1 / count - m.e_r1 * m.e_r1;
    m.var_r2 = sr2r2 / count - m.e_r2 * m.e_r2;
    m.cov_r12 = sr1r2 / count - m.e_r1 * m.e_r2;
    return m;
}

CrossMomentsOracle permutation_cross_moments(const std::vector<std::size_t>& sizes) {
    const std::size_t N = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (N > kMaxPermutationNodes) throw std::invalid_argument("permutation oracle budget exceeded");
    if (N % 2 != 0) throw std::invalid_argument("need even N");
    const std::size_t k = sizes.size();
    const std::size_t dim = k * (k - 1) / 2;

    // Fixed matching (0,1), (2,3), ...
    double count = 0.0;
    std::vector<double> s1(dim, 0.0);
    std::vector<double> s2(dim * dim, 0.0);
    std::vector<double> a(dim);
    enumerate_labelings(sizes, [&](const std::vector<int>& labels) {
        std::fill(a.begin(), a.end(), 0.0);
        for (std::size_t pair = 0; pair < N / 2; ++pair) {
            const int la = labels[2 * pair] - 1;
            const int lb = labels[2 * pair + 1] - 1;
            if (la != lb) {
                a[CrossCounts::cross_index(k, static_cast<std::size_t>(std::min(la, lb)),
                                           static_cast<std::size_t>(std::max(la, lb)))] += 1.0;
            }
        }
        count += 1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            s1[i] += a[i];
            for (std::size_t j = 0; j < dim; ++j) s2[i * dim + j] += a[i] * a[j];
        }
    });

    CrossMomentsOracle out;
    out.mean.assign(dim, 0.0);
    out.cov.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] = s1[i] / count;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out.cov[i * dim + j] = s2[i * dim + j] / count - out.mean[i] * out.mean[j];
        }
    }
    return out;
}

BruteMatching brute_force_matching(const DistanceMatrix& D) {
    const std::size_t N = D.size();
    if (N > kMaxMatchingNodes) throw std::invalid_argument("matching oracle budget exceeded");
    if (N % 2 != 0) throw std::invalid_argument("need even N");

    BruteMatching best;
    best.weight = std::numeric_limits<double>::infinity();
    std::vector<bool> used(N, false);
    std::vector<std::pair<int, int>> current;
    std::function<void(double)> rec = [&](double acc) {
        std::size_t first = N;
        for (std::size_t i = 0; i < N; ++i) {
            if (!used[i]) {
                first = i;
                break;
            }
        }
        if (first == N) {
            if (acc < best.weight) {
                best.weight = acc;
                best.pairs = current;
            }
            return;
        }
        used[first] = true;
        for (std::size_t j = first + 1; j < N; ++j) {
            if (used[j]) continue;
            used[j] = true;
            current.emplace_back(static_cast<int>(first), static_cast<int>(j));
            rec(acc + D.at(first, j));
            current.pop_back();
            used[j] = false;
        }
        used[first] = false;
    };
    rec(0.0);
    std::sort(best.pairs.begin(), best.pairs.end());
    return best;
}

namespace {

struct ValueView {
    std::vector<std::vector<int>> members;
    std::vector<double> dist;  // K x K
    std::vector<int> value_of;
    int K = 0;
    double d(int u, int v) const { return dist[static_cast<std::size_t>(u) * K + v]; }
};

ValueView contract_for_oracle(const DistanceMatrix& D) {
    const int n = static_cast<int>(D.size());
    ValueView v;
    v.value_of.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> rep;
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t g = 0; g < rep.size() && !placed; ++g) {
            if (D.at(static_cast<std::size_t>(rep[g]), static_cast<std::size_t>(i)) == 0.0) {
                v.members[g].push_back(i);
                v.value_of[static_cast<std::size_t>(i)] = static_cast<int>(g);
                placed = true;
            }
        }
        if (!placed) {
            v.value_of[static_cast<std::size_t>(i)] = static_cast<int>(rep.size());
            rep.push_back(i);
            v.members.push_back({i});
        }
    }
    v.K = static_cast<int>(rep.size());
    v.dist.assign(static_cast<std::size_t>(v.K) * v.K, 0.0);
    for (int a = 0; a < v.K; ++a) {
        for (int b = 0; b < v.K; ++b) {
            v.dist[static_cast<std::size_t>(a) * v.K + b] =
                D.at(static_cast<std::size_t>(rep[static_cast<std::size_t>(a)]),
                     static_cast<std::size_t>(rep[static_cast<std::size_t>(b)]));
        }
    }
    return v;
}

// All labeled spanning trees on the given vertex set via Pruefer sequences.
std::vector<std::vector<std::pair<int, int>>> all_spanning_trees(const std::vector<int>& nodes) {
    const std::size_t m = nodes.size();
    std::vector<std::vector<std::pair<int, int>>> trees;
    if (m == 1) {
        trees.push_back({});
        return trees;
    }
    if (m == 2) {
        trees.push_back({{nodes[0], nodes[1]}});
        return trees;
    }
    std::vector<std::size_t> pruefer(m - 2, 0);
    while (true) {
        // Decode.
        std::vector<int> degree(m, 1);
        for (std::size_t s : pruefer) degree[s] += 1;
        std::vector<std::pair<int, int>> edges;
        std::vector<int> deg = degree;
        std::vector<bool> used(m, false);
        for (std::size_t t = 0; t < m - 2; ++t) {
            std::size_t leaf = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (!used[i] && deg[i] == 1) {
                    leaf = i;
                    break;
                }
            }
            edges.emplace_back(nodes[leaf], nodes[pruefer[t]]);
            used[leaf] = true;
            --deg[pruefer[t]];
            --deg[leaf];
        }
        std::vector<std::size_t> last;
        for (std::size_t i = 0; i < m; ++i) {
            if (!used[i] && deg[i] == 1) last.push_back(i);
        }
        edges.emplace_back(nodes[last[0]], nodes[last[1]]);
        for (auto& [a, b] : edges) {
            if (a > b) std::swap(a, b);
        }
        trees.push_back(std::move(edges));
        // Next sequence.
        std::size_t pos = 0;
        while (pos < pruefer.size()) {
            if (++pruefer[pos] < m) break;
            pruefer[pos] = 0;
            ++pos;
        }
        if (pos == pruefer.size()) break;
    }
    return trees;
}

void finalize_family(OptimalGraphFamily* fam) {
    std::map<std::pair<int, int>, std::size_t> counts;
    for (const auto& g : fam->graphs) {
        for (const auto& e : g) counts[e] += 1;
    }
    for (const auto& [e, c] : counts) {
        fam->edge_frequency[e] =
            static_cast<double>(c) / static_cast<double>(fam->graphs.size());
        fam->union_edges.push_back(e);
    }
    std::sort(fam->union_edges.begin(), fam->union_edges.end());
}

} // namespace

OptimalGraphFamily enumerate_optimal_knn_graphs(const DistanceMatrix& D, int k) {
    const std::size_t N = D.size();
    if (N > kMaxGraphNodes) throw std::invalid_argument("graph oracle budget exceeded");
    const ValueView vv = contract_for_oracle(D);

    // Admissible neighbor-value selections per value.
    std::vector<std::vector<std::vector<int>>> choices(static_cast<std::size_t>(vv.K));
    for (int u = 0; u < vv.K; ++u) {
        std::vector<std::pair<double, int>> others;
        for (int v = 0; v < vv.K; ++v) {
            if (v != u) others.emplace_back(vv.d(u, v), v);
        }
        std::sort(others.begin(), others.end());
        if (static_cast<int>(others.size()) <= k) {
            std::vector<int> all;
            for (auto& [d, v] : others) all.push_back(v);
            choices[static_cast<std::size_t>(u)].push_back(all);
            continue;
        }
        const double dk = others[static_cast<std::size_t>(k - 1)].first;
        std::vector<int> forced, tied;
        for (auto& [d, v] : others) {
            if (d < dk) forced.push_back(v);
            else if (d == dk) tied.push_back(v);
        }
        const std::size_t s = static_cast<std::size_t>(k) - forced.size();
        // All s-subsets of the tied values.
        std::vector<bool> mask(tied.size(), false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(s), true);
        std::sort(mask.begin(), mask.end());
        do {
            std::vector<int> sel = forced;
            for (std::size_t i = 0; i < tied.size(); ++i) {
                if (mask[i]) sel.push_back(tied[i]);
            }
            choices[static_cast<std::size_t>(u)].push_back(sel);
        } while (std::next_permutation(mask.begin(), mask.end()));
    }

    // Per-class spanning trees.
    std::vector<std::vector<std::vector<std::pair<int, int>>>> class_trees;
    for (const auto& mem : vv.members) class_trees.push_back(all_spanning_trees(mem));

    OptimalGraphFamily fam;

    std::function<void(std::size_t, std::vector<std::pair<int, int>>&)> rec_values =
        [&](std::size_t u, std::vector<std::pair<int, int>>& value_edges) {
            if (u == static_cast<std::size_t>(vv.K)) {
                // Symmetrized union of selections -> distinct value edges.
                std::vector<std::pair<int, int>> uniq = value_edges;
                std::sort(uniq.begin(), uniq.end());
                uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

                // Representative pairs per value edge, all combinations.
                std::function<void(std::size_t, std::vector<std::pair<int, int>>&)> rec_reps =
                    [&](std::size_t ei, std::vector<std::pair<int, int>>& cross) {
                        if (ei == uniq.size()) {
                            // Class trees, all combinations.
                            std::function<void(std::size_t, std::vector<std::pair<int, int>>&)>
                                rec_trees = [&](std::size_t ci,
                                                std::vector<std::pair<int, int>>& within) {
                                    if (ci == class_trees.size()) {
                                        std::vector<std::pair<int, int>> g = cross;
                                        g.insert(g.end(), within.begin(), within.end());
                                        for (auto& [a, b] : g) {
                                            if (a > b) std::swap(a, b);
                                        }
                                        std::sort(g.begin(), g.end());
                                        fam.graphs.push_back(g);
                                        return;
                                    }
                                    for (const auto& tree : class_trees[ci]) {
                                        const std::size_t before = within.size();
                                        within.insert(within.end(), tree.begin(), tree.end());
                                        rec_trees(ci + 1, within);
                                        within.resize(before);
                                    }
                                };
                            std::vector<std::pair<int, int>> within;
                            rec_trees(0, within);
                            return;
                        }
                        const auto [u1, v1] = uniq[ei];
                        for (int a : vv.members[static_cast<std::size_t>(u1)]) {
                            for (int b : vv.members[static_cast<std::size_t>(v1)]) {
                                cross.emplace_back(std::min(a, b), std::max(a, b));
                                rec_reps(ei + 1, cross);
                                cross.pop_back();
                            }
                        }
                    };
                std::vector<std::pair<int, int>> cross;
                rec_reps(0, cross);
                return;
            }
            for (const auto& sel : choices[u]) {
                const std::size_t before = value_edges.size();
                for (int v : sel) {
                    value_edges.emplace_back(std::min<int>(static_cast<int>(u), v),
                                             std::max<int>(static_cast<int>(u), v));
                }
                rec_values(u + 1, value_edges);
                value_edges.resize(before);
            }
        };
    std::vector<std::pair<int, int>> value_edges;
    rec_values(0, value_edges);

    // Edge frequencies under the tie-resolution measure: resolutions are
    // uniform, and within one resolution the class trees and representative
    // pairs are uniform. (The flat graph list above is kept for callers that
    // want the family itself; value graphs with more edges have more
    // realizations there, so its frequencies would differ.)
    std::size_t resolutions = 0;
    std::map<std::pair<int, int>, double> cross_freq;
    std::function<void(std::size_t, std::vector<std::pair<int, int>>&)> rec_freq =
        [&](std::size_t u, std::vector<std::pair<int, int>>& value_edges2) {
            if (u == static_cast<std::size_t>(vv.K)) {
                ++resolutions;
                std::vector<std::pair<int, int>> uniq = value_edges2;
                std::sort(uniq.begin(), uniq.end());
                uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
                for (const auto& [u1, v1] : uniq) {
                    const auto& mu = vv.members[static_cast<std::size_t>(u1)];
                    const auto& mv = vv.members[static_cast<std::size_t>(v1)];
                    const double share = 1.0 / static_cast<double>(mu.size() * mv.size());
                    for (int a : mu) {
                        for (int b : mv) {
                            cross_freq[{std::min(a, b), std::max(a, b)}] += share;
                        }
                    }
                }
                return;
            }
            for (const auto& sel : choices[u]) {
                const std::size_t before = value_edges2.size();
                for (int v : sel) {
                    value_edges2.emplace_back(std::min<int>(static_cast<int>(u), v),
                                              std::max<int>(static_cast<int>(u), v));
                }
                rec_freq(u + 1, value_edges2);
                value_edges2.resize(before);
            }
        };
    value_edges.clear();
    rec_freq(0, value_edges);

    fam.edge_frequency.clear();
    fam.union_edges.clear();
    for (const auto& [e, acc] : cross_freq) {
        fam.edge_frequency[e] = acc / static_cast<double>(resolutions);
    }
    // Within-class pairs: inclusion frequency over the enumerated spanning
    // trees of the class clique.
    for (std::size_t c = 0; c < class_trees.size(); ++c) {
        if (vv.members[c].size() < 2) continue;
        std::map<std::pair<int, int>, std::size_t> counts;
        for (const auto& tree : class_trees[c]) {
            for (const auto& e : tree) counts[e] += 1;
        }
        for (const auto& [e, cnt] : counts) {
            fam.edge_frequency[e] =
                static_cast<double>(cnt) / static_cast<double>(class_trees[c].size());
        }
    }
    for (const auto& [e, f] : fam.edge_frequency) fam.union_edges.push_back(e);
    std::sort(fam.union_edges.begin(), fam.union_edges.end());
    return fam;
}

OptimalGraphFamily enumerate_optimal_mst_graphs(const DistanceMatrix& D) {
    const std::size_t N = D.size();
    if (N > kMaxGraphNodes) throw std::invalid_argument("graph oracle budget exceeded");

    std::vector<int> nodes(N);
    std::iota(nodes.begin(), nodes.end(), 0);
    const auto trees = all_spanning_trees(nodes);

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> weights(trees.size(), 0.0);
    for (std::size_t t = 0; t < trees.size(); ++t) {
        double w = 0.0;
        for (const auto& [a, b] : trees[t]) {
            w += D.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        }
        weights[t] = w;
        best = std::min(best, w);
    }
    OptimalGraphFamily fam;
    for (std::size_t t = 0; t < trees.size(); ++t) {
        if (weights[t] <= best + 1e-12) {
            auto g = trees[t];
            std::sort(g.begin(), g.end());
            fam.graphs.push_back(std::move(g));
        }
    }
    finalize_family(&fam);
    return fam;
}

double transport_vertex_optimum(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<double>& cost) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m > kMaxTransportSupport || n > kMaxTransportSupport) {
        throw std::invalid_argument("transport oracle budget exceeded");
    }
    double sa = 0.0, sb = 0.0;
    for (double x : a) sa += x;
    for (double x : b) sb += x;

    // Enumerate all spanning trees of K_{m,n}; each is a basis whose flows
    // are determined by leaf elimination; feasible ones are vertices.
    const std::size_t E = m * n;
    std::vector<std::pair<int, int>> arcs;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            arcs.emplace_back(static_cast<int>(i), static_cast<int>(m + j));
        }
    }
    const std::size_t need = m + n - 1;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(need, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == need) {
            // Check tree and solve flows by leaf elimination.
            std::vector<std::vector<std::pair<int, std::size_t>>> adj(m + n);
            for (std::size_t t = 0; t < need; ++t) {
                const auto [u, v] = arcs[pick[t]];
                adj[static_cast<std::size_t>(u)].push_back({v, pick[t]});
                adj[static_cast<std::size_t>(v)].push_back({u, pick[t]});
            }
            std::vector<double> bal(m + n);
            for (std::size_t i = 0; i < m; ++i) bal[i] = a[i] / sa;
            for (std::size_t j = 0; j < n; ++j) bal[m + j] = -b[j] / sb;
            std::vector<int> deg(m + n, 0);
            for (std::size_t x = 0; x < m + n; ++x) deg[x] = static_cast<int>(adj[x].size());
            std::vector<bool> arc_done(E, false);
            std::vector<double> flow(E, 0.0);
            std::vector<std::size_t> leaves;
            for (std::size_t x = 0; x < m + n; ++x) {
                if (deg[x] == 1) leaves.push_back(x);
            }
            if (leaves.empty()) return;  // not a tree (cycle or disconnected)
            std::size_t processed = 0;
            std::vector<bool> node_done(m + n, false);
            while (!leaves.empty()) {
                const std::size_t x = leaves.back();
                leaves.pop_back();
                if (node_done[x]) continue;
                std::size_t arc_id = E;
                int other = -1;
                for (const auto& [y, id] : adj[x]) {
                    if (!arc_done[id]) {
                        arc_id = id;
                        other = y;
                        break;
                    }
                }
                if (arc_id == E) {
                    node_done[x] = true;
                    continue;
                }
                const bool x_is_source = x < m;
                flow[arc_id] = x_is_source ? bal[x] : -bal[x];
                bal[static_cast<std::size_t>(other)] += bal[x];
                bal[x] = 0.0;
                arc_done[arc_id] = true;
                node_done[x] = true;
                ++processed;
                if (--deg[static_cast<std::size_t>(other)] == 1) {
                    leaves.push_back(static_cast<std::size_t>(other));
                }
            }
            if (processed != need) return;  // disconnected
            double total = 0.0;
            for (std::size_t t = 0; t < need; ++t) {
                const std::size_t id = pick[t];
                if (flow[id] < -1e-12) return;  // infeasible basis
                total += std::max(0.0, flow[id]) *
                         cost[static_cast<std::size_t>(arcs[id].first) * n +
                              (static_cast<std::size_t>(arcs[id].second) - m)];
            }
            best = std::min(best, total);
            return;
        }
        for (std::size_t e = start; e + (need - depth - 1) < E; ++e) {
            pick[depth] = e;
            rec(e + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

VerifyReport run_verification(std::uint64_t seed) {
    VerifyReport report;
    Rng rng(seed);
    std::ostringstream line;

    // Edge-count moments vs enumeration on random graphs.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t N = 4 + rng.next_below(5);  // 4..8
            std::vector<WeightedEdge> edges;
            for (int u = 0; u < static_cast<int>(N); ++u) {
                for (int v = u + 1; v < static_cast<int>(N); ++v) {
                    if (rng.next_double() < 0.6) {
                        const double w = (trial % 2 == 0) ? 1.0 : 0.25 + rng.next_double();
                        edges.push_back({u, v, w});
                    }
                }
            }
            if (edges.empty()) continue;
            const std::size_t n1 = 1 + rng.next_below(N - 1);
            SimilarityGraph g;
            g.nodes = N;
            g.edges = edges;
            const NullMoments got = null_moments(g, n1, N - n1);
            const EdgeCountMoments want = permutation_edge_moments(edges, n1, N - n1);
            worst = std::max({worst, std::abs(got.e_r - want.e_r), std::abs(got.var_r - want.var_r),
                              std::abs(got.var_r1 - want.var_r1), std::abs(got.var_r2 - want.var_r2),
                              std::abs(got.cov_r12 - want.cov_r12)});
        }
        report.lines.push_back("edge-count moments vs enumeration: max |diff| = " +
                               format_double(worst));
        if (worst > 1e-10) report.ok = false;
    }

    // Matching vs brute force.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t N = 4 + 2 * rng.next_below(4);  // 4,6,8,10
            DistanceMatrix D(N, Metric::Hamming);
            for (std::size_t i = 0; i < N; ++i) {
                for (std::size_t j = i + 1; j < N; ++j) {
                    D.set(i, j, 1.0 + static_cast<double>(rng.next_below(6)));
                }
            }
            const Matching got = min_weight_matching(D);
            const BruteMatching want = brute_force_matching(D);
            worst = std::max(worst, std::abs(got.total_weight - want.weight));
        }
        report.lines.push_back("matching vs brute force: max |diff| = " + format_double(worst));
        if (worst > 1e-9) report.ok = false;
    }

    // Cross-count moments vs enumeration.
    {
        double worst = 0.0;
        for (const auto& sizes : std::vector<std::vector<std::size_t>>{
                 {2, 2}, {3, 3}, {2, 4}, {2, 2, 2}, {2, 2, 2, 2}}) {
            const CrossMoments got = crossmatch_null_moments(sizes);
            const CrossMomentsOracle want = permutation_cross_moments(sizes);
            for (std::size_t i = 0; i < got.mean.size(); ++i) {
                worst = std::max(worst, std::abs(got.mean[i] - want.mean[i]));
            }
            for (std::size_t i = 0; i < got.cov.size(); ++i) {
                worst = std::max(worst, std::abs(got.cov[i] - want.cov[i]));
            }
        }
        report.lines.push_back("cross-count moments vs enumeration: max |diff| = " +
                               format_double(worst));
        if (worst > 1e-10) report.ok = false;
    }
    return report;
}

} // namespace oracles
} // namespace datasim
