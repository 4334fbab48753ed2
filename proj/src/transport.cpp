#include "datasim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace datasim {

namespace {

std::int64_t sum_of(const std::vector<std::int64_t>& v) {
    std::int64_t s = 0;
    for (std::int64_t x : v) {
        if (x < 0) throw std::invalid_argument("negative mass");
        s += x;
    }
    return s;
}

} // namespace

TransportResult exact_transport(const std::vector<std::int64_t>& a,
                                const std::vector<std::int64_t>& b,
                                const std::vector<double>& cost) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m == 0 || n == 0) throw std::invalid_argument("empty support");
    if (cost.size() != m * n) throw std::invalid_argument("cost size mismatch");
    const std::int64_t sa = sum_of(a);
    const std::int64_t sb = sum_of(b);
    if (sa == 0 || sb == 0) throw std::invalid_argument("zero total mass");

    // Common integer grid: supply_i = a_i * sb, demand_j = b_j * sa.
    std::vector<std::int64_t> supply(m), demand(n);
    for (std::size_t i = 0; i < m; ++i) supply[i] = a[i] * sb;
    for (std::size_t j = 0; j < n; ++j) demand[j] = b[j] * sa;
    const double total = static_cast<double>(sa) * static_cast<double>(sb);

    std::vector<std::int64_t> flow(m * n, 0);
    std::vector<double> pot_u(m, 0.0), pot_v(n, 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t guard = 128 * (m + n) + 4096;
    std::size_t augmentations = 0;

    std::size_t src = 0;
    while (true) {
        while (src < m && supply[src] == 0) ++src;
        if (src == m) break;
        if (++augmentations > guard) {
            throw std::runtime_error("transport solver exceeded augmentation guard");
        }

        // Dijkstra from src over the residual bipartite graph with reduced
        // costs c_ij + u_i - v_j (forward) and v_j - u_i - c_ij = -(..)
        // (backward); potentials keep both nonnegative.
        std::vector<double> dist_u(m, inf), dist_v(n, inf);
        std::vector<int> par_v(n, -1);   // sink j reached from source par_v[j]
        std::vector<int> par_u(m, -1);   // source i reached back from sink par_u[i]
        std::vector<bool> done_u(m, false), done_v(n, false);
        using Item = std::pair<double, int>;  // (dist, node); node < m source else sink m+j
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist_u[src] = 0.0;
        pq.push({0.0, static_cast<int>(src)});
        int reached_sink = -1;

        while (!pq.empty()) {
            const auto [d, node] = pq.top();
            pq.pop();
            if (node < static_cast<int>(m)) {
                const std::size_t i = static_cast<std::size_t>(node);
                if (done_u[i] || d > dist_u[i]) continue;
                done_u[i] = true;
                for (std::size_t j = 0; j < n; ++j) {
                    if (done_v[j]) continue;
                    const double rc =
                        std::max(0.0, cost[i * n + j] + pot_u[i] - pot_v[j]);
                    if (dist_u[i] + rc < dist_v[j]) {
                        dist_v[j] = dist_u[i] + rc;
                        par_v[j] = static_cast<int>(i);
                        pq.push({dist_v[j], static_cast<int>(m + j)});
                    }
                }
            } else {
                const std::size_t j = static_cast<std::size_t>(node) - m;
                if (done_v[j] || d > dist_v[j]) continue;
                done_v[j] = true;
                if (demand[j] > 0 && reached_sink < 0) {
                    reached_sink = static_cast<int>(j);
                    break;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    if (done_u[i] || flow[i * n + j] == 0) continue;
                    const double rc =
                        std::max(0.0, pot_v[j] - pot_u[i] - cost[i * n + j]);
                    if (dist_v[j] + rc < dist_u[i]) {
                        dist_u[i] = dist_v[j] + rc;
                        par_u[i] = static_cast<int>(j);
                        pq.push({dist_u[i], static_cast<int>(i)});
                    }
                }
            }
        }
        if (reached_sink < 0) {
            throw std::runtime_error("transport solver failed to reach a sink");
        }

        // Update potentials with the found distances.
        const double dstar = dist_v[static_cast<std::size_t>(reached_sink)];
        for (std::size_t i = 0; i < m; ++i) {
            if (dist_u[i] < inf) pot_u[i] += std::min(dist_u[i], dstar);
            else pot_u[i] += dstar;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (dist_v[j] < inf) pot_v[j] += std::min(dist_v[j], dstar);
            else pot_v[j] += dstar;
        }

        // Trace the augmenting path and find its bottleneck.
        std::int64_t delta = std::min(supply[src], demand[static_cast<std::size_t>(reached_sink)]);
        {
            std::size_t j = static_cast<std::size_t>(reached_sink);
            while (true) {
                const std::size_t i = static_cast<std::size_t>(par_v[j]);
                if (i == src) break;
                const std::size_t jprev = static_cast<std::size_t>(par_u[i]);
                delta = std::min(delta, flow[i * n + jprev]);
                j = jprev;
            }
        }
        {
            std::size_t j = static_cast<std::size_t>(reached_sink);
            while (true) {
                const std::size_t i = static_cast<std::size_t>(par_v[j]);
                flow[i * n + j] += delta;
                if (i == src) break;
                const std::size_t jprev = static_cast<std::size_t>(par_u[i]);
                flow[i * n + jprev] -= delta;
                j = jprev;
            }
        }
        supply[src] -= delta;
        demand[static_cast<std::size_t>(reached_sink)] -= delta;
    }

    TransportResult res;
    res.plan.assign(m * n, 0.0);
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (flow[i * n + j] != 0) {
                const double p = static_cast<double>(flow[i * n + j]) / total;
                res.plan[i * n + j] = p;
                c += p * cost[i * n + j];
            }
        }
    }
    res.cost = c;
    res.iterations = static_cast<int>(augmentations);
    return res;
}

TransportResult sinkhorn_transport(const std::vector<std::int64_t>& a,
                                   const std::vector<std::int64_t>& b,
                                   const std::vector<double>& cost, double eps_scale,
                                   int max_iterations, double marginal_tol, bool record_trace) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m == 0 || n == 0) throw std::invalid_argument("empty support");
    if (cost.size() != m * n) throw std::invalid_argument("cost size mismatch");
    const std::int64_t sa = sum_of(a);
    const std::int64_t sb = sum_of(b);
    if (sa == 0 || sb == 0) throw std::invalid_argument("zero total mass");

    std::vector<double> pa(m), pb(n);
    for (std::size_t i = 0; i < m; ++i) pa[i] = static_cast<double>(a[i]) / static_cast<double>(sa);
    for (std::size_t j = 0; j < n; ++j) pb[j] = static_cast<double>(b[j]) / static_cast<double>(sb);

    double cmean = 0.0;
    for (double c : cost) cmean += c;
    cmean /= static_cast<double>(m * n);

    TransportResult res;
    if (cmean <= 0.0) {
        // All costs zero: the product plan is optimal with zero cost.
        res.plan.assign(m * n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) res.plan[i * n + j] = pa[i] * pb[j];
        }
        res.cost = 0.0;
        return res;
    }
    const double eps = eps_scale * cmean;

    std::vector<double> f(m, 0.0), g(n, 0.0);
    std::vector<double> loga(m), logb(n);
    for (std::size_t i = 0; i < m; ++i) loga[i] = std::log(pa[i]);
    for (std::size_t j = 0; j < n; ++j) logb[j] = std::log(pb[j]);

    auto plan_entry = [&](std::size_t i, std::size_t j) {
        return std::exp((f[i] + g[j] - cost[i * n + j]) / eps + loga[i] + logb[j]);
    };
    auto plan_cost = [&]() {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) c += plan_entry(i, j) * cost[i * n + j];
        }
        return c;
    };

    double violation = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iterations; ++it) {
        // f update: row marginals exact afterwards.
        for (std::size_t i = 0; i < m; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                mx = std::max(mx, (g[j] - cost[i * n + j]) / eps + logb[j]);
            }
            double lse = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                lse += std::exp((g[j] - cost[i * n + j]) / eps + logb[j] - mx);
            }
            f[i] = -eps * (mx + std::log(lse));
        }
        for (std::size_t j = 0; j < n; ++j) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                mx = std::max(mx, (f[i] - cost[i * n + j]) / eps + loga[i]);
            }
            double lse = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                lse += std::exp((f[i] - cost[i * n + j]) / eps + loga[i] - mx);
            }
            g[j] = -eps * (mx + std::log(lse));
        }
        if (record_trace) res.cost_trace.push_back(plan_cost());

        // Column marginals are exact after the g update; check rows.
        violation = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += plan_entry(i, j);
            violation = std::max(violation, std::abs(row - pa[i]));
        }
        if (violation < marginal_tol) {
            ++it;
            break;
        }
    }

    res.plan.assign(m * n, 0.0);
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double p = plan_entry(i, j);
            res.plan[i * n + j] = p;
            c += p * cost[i * n + j];
        }
    }
    res.cost = c;
    res.iterations = it;
    res.marginal_violation = violation;
    res.converged = violation < marginal_tol && std::isfinite(c);
    return res;
}

} // namespace datasim
