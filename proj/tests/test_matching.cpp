#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "datasim/matching.hpp"
#include "datasim/oracles.hpp"
#include "datasim/rng.hpp"

#include <cmath>
#include <set>

using namespace datasim;

namespace {

DistanceMatrix random_integer_matrix(std::size_t n, int max_dist, Rng& rng) {
    DistanceMatrix D(n, Metric::Hamming);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            D.set(i, j, 1.0 + static_cast<double>(rng.next_below(static_cast<std::uint64_t>(max_dist))));
        }
    }
    return D;
}

DistanceMatrix random_real_matrix(std::size_t n, Rng& rng) {
    DistanceMatrix D(n, Metric::EuclideanDummy);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            D.set(i, j, 0.1 + rng.next_double());
        }
    }
    return D;
}

bool is_perfect(const Matching& m, std::size_t n) {
    std::set<int> seen;
    for (const auto& [a, b] : m.pairs) {
        seen.insert(a);
        seen.insert(b);
    }
    if (m.phantom_partner >= 0) seen.insert(m.phantom_partner);
    return seen.size() == n;
}

} // namespace

TEST_CASE("uniquely cheapest pairs are selected") {
    DistanceMatrix D(4, Metric::Hamming);
    D.set(0, 1, 1.0);
    D.set(2, 3, 1.0);
    D.set(0, 2, 10.0);
    D.set(0, 3, 10.0);
    D.set(1, 2, 10.0);
    D.set(1, 3, 10.0);
    const Matching m = min_weight_matching(D);
    CHECK(m.pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(m.total_weight == 2.0);
}

TEST_CASE("all-equal distances give some perfect matching of full weight") {
    DistanceMatrix D(6, Metric::Hamming);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) D.set(i, j, 3.0);
    }
    const Matching a = min_weight_matching(D);
    const Matching b = min_weight_matching(D);
    CHECK(a.total_weight == 9.0);  // N/2 * d
    CHECK(is_perfect(a, 6));
    CHECK(a.pairs == b.pairs);  // deterministic policy is reproducible
}

TEST_CASE("matching equals brute force on random integer instances") {
    Rng rng(101);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 4 + 2 * rng.next_below(4);  // 4..10
        const DistanceMatrix D = random_integer_matrix(n, 6, rng);
        const Matching got = min_weight_matching(D);
        const auto want = oracles::brute_force_matching(D);
        CHECK(got.total_weight == want.weight);  // integral weights: exact
        CHECK(is_perfect(got, n));
    }
}

TEST_CASE("matching equals brute force on random real instances") {
    Rng rng(103);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 4 + 2 * rng.next_below(4);
        const DistanceMatrix D = random_real_matrix(n, rng);
        const Matching got = min_weight_matching(D);
        const auto want = oracles::brute_force_matching(D);
        CHECK(std::abs(got.total_weight - want.weight) < 1e-9);
    }
}

TEST_CASE("heavily tied instances stay optimal") {
    Rng rng(107);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 6 + 2 * rng.next_below(3);  // 6..10
        const DistanceMatrix D = random_integer_matrix(n, 2, rng);  // distances 1 or 2
        const Matching got = min_weight_matching(D);
        const auto want = oracles::brute_force_matching(D);
        CHECK(got.total_weight == want.weight);
    }
}

TEST_CASE("odd N uses a phantom and excludes its pair") {
    Rng rng(109);
    const DistanceMatrix D = random_integer_matrix(7, 5, rng);
    const Matching m = min_weight_matching(D);
    CHECK(m.pairs.size() == 3);
    CHECK(m.phantom_partner >= 0);
    CHECK(is_perfect(m, 7));
    CHECK_THROWS(min_weight_matching(DistanceMatrix(1, Metric::Hamming)));
}

TEST_CASE("dual certificate holds on random instances") {
    Rng rng(113);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + rng.next_below(9);  // 4..12, odd included
        const DistanceMatrix D =
            trial % 2 == 0 ? random_integer_matrix(n, 4, rng) : random_real_matrix(n, rng);
        const Matching m = min_weight_matching(D);
        CHECK(matching_certificate_violation(D, m) < 1e-8);
        CHECK(std::abs(m.dual_gap) < 1e-8);
    }
}

TEST_CASE("permuted policy changes order but keeps optimal weight") {
    Rng rng(127);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6 + 2 * rng.next_below(3);
        const DistanceMatrix D = random_integer_matrix(n, 3, rng);
        const Matching det = min_weight_matching(D);
        const Matching per = min_weight_matching(D, MatchPolicy::permuted_with(trial));
        CHECK(det.total_weight == per.total_weight);
        CHECK(is_perfect(per, n));
        CHECK(matching_certificate_violation(D, per) < 1e-8);
    }
}

TEST_CASE("larger instances satisfy the duality certificate") {
    Rng rng(131);
    DistanceMatrix D(60, Metric::Hamming);
    for (std::size_t i = 0; i < 60; ++i) {
        for (std::size_t j = i + 1; j < 60; ++j) {
            D.set(i, j, 1.0 + static_cast<double>(rng.next_below(3)));
        }
    }
    const Matching m = min_weight_matching(D);
    CHECK(m.pairs.size() == 30);
    CHECK(matching_certificate_violation(D, m) < 1e-8);
}
