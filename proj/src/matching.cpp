#include "datasim/matching.hpp"

#include "datasim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace datasim {

namespace {

// Primal-dual blossom algorithm for maximum weight matching on a dense
// graph, O(n^3). Vertices are 1..n, pseudo-nodes occupy n+1..2n. Duals are
// kept doubled (lab = 2y) so halving stays exact; with integral weights the
// whole computation is exact, with real weights comparisons use kEps.
//
// On a complete graph whose weights are all positive the maximum weight
// matching is perfect, which is how the minimization wrapper below uses it.
class BlossomMatcher {
public:
    static constexpr double kEps = 1e-9;

    explicit BlossomMatcher(const std::vector<std::vector<double>>& w)
        : n_(static_cast<int>(w.size())), cap_(2 * n_ + 1) {
        ew_.assign(cap_, std::vector<double>(cap_, 0.0));
        eu_.assign(cap_, std::vector<int>(cap_, 0));
        ev_.assign(cap_, std::vector<int>(cap_, 0));
        match_.assign(cap_, 0);
        slack_.assign(cap_, 0);
        st_.assign(cap_, 0);
        pa_.assign(cap_, 0);
        s_.assign(cap_, -1);
        lab_.assign(cap_, 0.0);
        vis_.assign(cap_, 0);
        flower_.assign(cap_, {});
        flower_from_.assign(cap_, std::vector<int>(cap_, 0));
        alive_.assign(cap_, false);

        double wmax = 0.0;
        for (int u = 1; u <= n_; ++u) {
            for (int v = 1; v <= n_; ++v) {
                eu_[u][v] = u;
                ev_[u][v] = v;
                if (u != v) {
                    ew_[u][v] = w[u - 1][v - 1];
                    wmax = std::max(wmax, ew_[u][v]);
                }
            }
        }
        n_x_ = n_;
        for (int u = 1; u <= n_; ++u) {
            st_[u] = u;
            lab_[u] = wmax;
            flower_from_[u][u] = u;
        }
    }

    void run() {
        while (try_augment()) {
        }
    }

    int mate(int u) const { return match_[u]; }

    std::vector<double> vertex_duals() const {
        std::vector<double> y(static_cast<std::size_t>(n_));
        for (int u = 1; u <= n_; ++u) y[static_cast<std::size_t>(u - 1)] = lab_[u] / 2.0;
        return y;
    }

    void live_blossoms(std::vector<std::vector<int>>* sets, std::vector<double>* duals) const {
        for (int b = n_ + 1; b <= n_x_; ++b) {
            if (!alive_[b]) continue;
            std::vector<int> reals;
            collect_reals(b, &reals);
            std::sort(reals.begin(), reals.end());
            sets->push_back(std::move(reals));
            duals->push_back(lab_[b] / 2.0);
        }
    }

private:
    // Reduced cost of the edge stored in slot (a, b): always evaluated on the
    // real endpoints, matching how blossom duals enter the LP.
    double delta(int a, int b) const {
        const int u = eu_[a][b];
        const int v = ev_[a][b];
        return lab_[u] + lab_[v] - ew_[u][v] * 2.0;
    }

    bool has_edge(int a, int b) const { return ew_[a][b] > 0.0; }

    void collect_reals(int x, std::vector<int>* out) const {
        if (x <= n_) {
            out->push_back(x - 1);
            return;
        }
        for (int i : flower_[x]) collect_reals(i, out);
    }

    void update_slack(int u, int x) {
        if (!slack_[x] || delta(u, x) < delta(slack_[x], x)) slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u) {
            if (has_edge(u, x) && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
        }
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int i : flower_[x]) q_push(i);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_) {
            for (int i : flower_[x]) set_st(i, b);
        }
    }

    int get_pr(int b, int xr) {
        auto it = std::find(flower_[b].begin(), flower_[b].end(), xr);
        int pr = static_cast<int>(it - flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return static_cast<int>(flower_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = ev_[u][v];
        if (u <= n_) return;
        const int xr = flower_from_[u][eu_[u][v]];
        const int pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
    }

    void augment(int u, int v) {
        while (true) {
            const int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        ++timestamp_;
        while (u || v) {
            if (u) {
                if (vis_[u] == timestamp_) return u;
                vis_[u] = timestamp_;
                u = st_[match_[u]];
                if (u) u = st_[pa_[u]];
            }
            std::swap(u, v);
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0.0;
        s_[b] = 0;
        match_[b] = match_[lca];
        alive_[b] = true;
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) {
            ew_[b][x] = ew_[x][b] = 0.0;
        }
        for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x_; ++x) {
                if (ew_[b][x] == 0.0 || delta(xs, x) < delta(b, x)) {
                    eu_[b][x] = eu_[xs][x];
                    ev_[b][x] = ev_[xs][x];
                    ew_[b][x] = ew_[xs][x];
                    eu_[x][b] = eu_[x][xs];
                    ev_[x][b] = ev_[x][xs];
                    ew_[x][b] = ew_[x][xs];
                }
            }
            for (int x = 1; x <= n_; ++x) {
                if (flower_from_[xs][x]) flower_from_[b][x] = xs;
            }
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int i : flower_[b]) set_st(i, i);
        const int xr = flower_from_[b][eu_[b][pa_[b]]];
        const int pr = get_pr(b, xr);
        for (int i = pr; i > 0; i -= 2) {
            const int xs = flower_[b][static_cast<std::size_t>(i - 1)];
            const int xns = flower_[b][static_cast<std::size_t>(i)];
            pa_[xs] = eu_[xns][xs];
            s_[xs] = 1;
            s_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        s_[xr] = 1;
        pa_[xr] = pa_[b];
        for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < flower_[b].size(); ++i) {
            const int xs = flower_[b][i];
            s_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
        alive_[b] = false;
    }

    bool on_found_edge(int eu, int ev) {
        const int u = st_[eu];
        const int v = st_[ev];
        if (s_[v] == -1) {
            pa_[v] = eu;
            s_[v] = 1;
            const int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            s_[nu] = 0;
            q_push(nu);
        } else if (s_[v] == 0) {
            const int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool try_augment() {
        std::fill(s_.begin() + 1, s_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        bool any_free = false;
        for (int x = 1; x <= n_x_; ++x) {
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                s_[x] = 0;
                q_push(x);
                any_free = true;
            }
        }
        if (!any_free) return false;

        while (true) {
            while (!q_.empty()) {
                const int u = q_.front();
                q_.pop_front();
                if (s_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v) {
                    if (has_edge(u, v) && st_[u] != st_[v]) {
                        if (delta(u, v) <= kEps) {
                            if (on_found_edge(u, v)) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
                }
            }

            double d = std::numeric_limits<double>::infinity();
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2.0);
            }
            for (int x = 1; x <= n_x_; ++x) {
                if (st_[x] == x && slack_[x]) {
                    if (s_[x] == -1) {
                        d = std::min(d, delta(slack_[x], x));
                    } else if (s_[x] == 0) {
                        d = std::min(d, delta(slack_[x], x) / 2.0);
                    }
                }
            }
            d = std::max(d, 0.0);

            for (int u = 1; u <= n_; ++u) {
                if (s_[st_[u]] == 0) {
                    if (lab_[u] - d <= kEps) return false;  // no augmenting path left
                    lab_[u] -= d;
                } else if (s_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[b] == b) {
                    if (s_[b] == 0) lab_[b] += 2.0 * d;
                    else if (s_[b] == 1) lab_[b] -= 2.0 * d;
                }
            }

            q_.clear();
            for (int x = 1; x <= n_x_; ++x) {
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    delta(slack_[x], x) <= kEps) {
                    if (on_found_edge(eu_[slack_[x]][x], ev_[slack_[x]][x])) return true;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b) {
                if (st_[b] == b && s_[b] == 1 && lab_[b] <= kEps) expand_blossom(b);
            }
        }
    }

    int n_;
    int cap_;
    int n_x_ = 0;
    int timestamp_ = 0;
    std::vector<std::vector<double>> ew_;
    std::vector<std::vector<int>> eu_, ev_;
    std::vector<int> match_, slack_, st_, pa_, s_, vis_;
    std::vector<double> lab_;
    std::vector<std::vector<int>> flower_;
    std::vector<std::vector<int>> flower_from_;
    std::vector<bool> alive_;
    std::deque<int> q_;
};

} // namespace

Matching min_weight_matching(const DistanceMatrix& D, MatchPolicy policy) {
    const std::size_t n_real = D.size();
    if (n_real < 2) {
        throw std::invalid_argument("matching requires at least 2 nodes");
    }

    std::vector<int> order(n_real);
    std::iota(order.begin(), order.end(), 0);
    if (policy.permuted) {
        Rng rng(policy.seed);
        rng.shuffle(order);
    }

    const bool odd = (n_real % 2) != 0;
    const std::size_t n = n_real + (odd ? 1 : 0);

    double dmax = 0.0;
    for (std::size_t i = 0; i < n_real; ++i) {
        for (std::size_t j = i + 1; j < n_real; ++j) {
            dmax = std::max(dmax, D.at(i, j));
        }
    }
    const double phantom_dist = dmax + 1.0;
    const double big = dmax + phantom_dist + 1.0;  // transform keeps weights positive

    // Maximize big - d, which minimizes total distance over perfect matchings.
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    auto dist_of = [&](std::size_t i, std::size_t j) {
        if (i == j) return 0.0;
        if (i >= n_real || j >= n_real) return phantom_dist;
        return D.at(order[i], order[j]);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) w[i][j] = big - dist_of(i, j);
        }
    }

    BlossomMatcher solver(w);
    solver.run();

    Matching m;
    m.permuted = policy.permuted;
    std::vector<int> mate(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int mi = solver.mate(static_cast<int>(i) + 1);
        if (mi == 0) {
            throw std::runtime_error("matching is not perfect");
        }
        mate[i] = mi - 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(mate[i]);
        if (j <= i) continue;
        if (j >= n_real) {
            m.phantom_partner = order[i];
            continue;
        }
        int a = order[i];
        int b = order[j];
        if (a > b) std::swap(a, b);
        m.pairs.emplace_back(a, b);
        m.total_weight += D.at(a, b);
    }
    std::sort(m.pairs.begin(), m.pairs.end());

    m.duals = solver.vertex_duals();
    solver.live_blossoms(&m.blossoms, &m.blossom_duals);
    // Translate permuted internal ids back to input ids.
    if (policy.permuted) {
        std::vector<double> duals(m.duals.size());
        for (std::size_t i = 0; i < n; ++i) duals[i] = m.duals[i];
        for (std::size_t i = 0; i < n_real; ++i) {
            duals[static_cast<std::size_t>(order[i])] = m.duals[i];
        }
        if (odd) duals[n_real] = m.duals[n_real];
        m.duals = std::move(duals);
        for (auto& set : m.blossoms) {
            for (int& x : set) {
                if (x < static_cast<int>(n_real)) x = order[static_cast<std::size_t>(x)];
            }
            std::sort(set.begin(), set.end());
        }
    }

    // Duality gap on the maximization form: sum w'(M) vs sum y + sum z*floor(|B|/2).
    double primal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(mate[i]);
        if (j > i) primal += w[i][j];
    }
    double dual = 0.0;
    for (double y : m.duals) dual += y;
    for (std::size_t b = 0; b < m.blossoms.size(); ++b) {
        dual += m.blossom_duals[b] * static_cast<double>(m.blossoms[b].size() / 2);
    }
    m.dual_gap = primal - dual;
    return m;
}

double matching_certificate_violation(const DistanceMatrix& D, const Matching& m) {
    const std::size_t n_real = D.size();
    const bool odd = (n_real % 2) != 0;
    const std::size_t n = n_real + (odd ? 1 : 0);
    if (m.duals.size() != n) return std::numeric_limits<double>::infinity();

    double dmax = 0.0;
    for (std::size_t i = 0; i < n_real; ++i) {
        for (std::size_t j = i + 1; j < n_real; ++j) dmax = std::max(dmax, D.at(i, j));
    }
    const double phantom_dist = dmax + 1.0;
    const double big = dmax + phantom_dist + 1.0;

    // Edge -> blossom dual contribution.
    std::vector<std::vector<double>> zsum(n, std::vector<double>(n, 0.0));
    for (std::size_t b = 0; b < m.blossoms.size(); ++b) {
        const auto& set = m.blossoms[b];
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t c = a + 1; c < set.size(); ++c) {
                zsum[static_cast<std::size_t>(set[a])][static_cast<std::size_t>(set[c])] +=
                    m.blossom_duals[b];
                zsum[static_cast<std::size_t>(set[c])][static_cast<std::size_t>(set[a])] +=
                    m.blossom_duals[b];
            }
        }
    }
    double worst = 0.0;
    for (double z : m.blossom_duals) worst = std::max(worst, -z);

    auto wprime = [&](std::size_t i, std::size_t j) {
        const double d = (i >= n_real || j >= n_real) ? phantom_dist : D.at(i, j);
        return big - d;
    };
    // Dual feasibility: y_u + y_v + z(u,v) >= w'(u,v).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double rc = m.duals[i] + m.duals[j] + zsum[i][j] - wprime(i, j);
            worst = std::max(worst, -rc);
        }
    }
    // Complementary slackness on matched pairs.
    for (const auto& [a, b] : m.pairs) {
        const double rc = m.duals[static_cast<std::size_t>(a)] + m.duals[static_cast<std::size_t>(b)] +
                          zsum[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                          wprime(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        worst = std::max(worst, std::abs(rc));
    }
    if (m.phantom_partner >= 0) {
        const std::size_t a = static_cast<std::size_t>(m.phantom_partner);
        const double rc = m.duals[a] + m.duals[n_real] + zsum[a][n_real] - wprime(a, n_real);
        worst = std::max(worst, std::abs(rc));
    }
    worst = std::max(worst, std::abs(m.dual_gap));
    return worst;
}

} // namespace datasim
