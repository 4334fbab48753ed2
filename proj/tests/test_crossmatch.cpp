#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "datasim/crossmatch.hpp"
#include "datasim/oracles.hpp"
#include "datasim/rng.hpp"

#include <cmath>

using namespace datasim;

namespace {

PooledSample random_pool(const std::vector<std::size_t>& sizes, std::size_t p, Code arity,
                         Rng& rng) {
    std::vector<CategoricalDataset> ds;
    for (std::size_t n : sizes) {
        std::vector<Code> v(n * p);
        for (auto& c : v) c = static_cast<Code>(rng.next_below(static_cast<std::uint64_t>(arity)));
        ds.emplace_back(std::move(v), n, p, std::vector<Code>(p, arity));
    }
    return pool(ds);
}

} // namespace

TEST_CASE("cross counts tabulate pairs") {
    Matching m;
    m.pairs = {{0, 2}, {1, 3}};
    const CrossCounts cc = cross_counts(m, {1, 1, 2, 2});
    CHECK(cc.cross_at(0, 1) == 2.0);
    CHECK(cc.within[0] == 0.0);
    CHECK(cc.total_pairs() == 2.0);

    const CrossCounts same = cross_counts(m, {1, 1, 1, 1});
    CHECK(same.within[0] == 2.0);
    CHECK(same.total_cross() == 0.0);
}

TEST_CASE("cross count identity sums to N/2 on random matchings") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + 2 * rng.next_below(4);
        DistanceMatrix D(n, Metric::Hamming);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                D.set(i, j, 1.0 + static_cast<double>(rng.next_below(4)));
            }
        }
        const Matching m = min_weight_matching(D);
        std::vector<int> mem;
        for (std::size_t i = 0; i < n; ++i) mem.push_back(1 + static_cast<int>(rng.next_below(3)));
        const CrossCounts cc = cross_counts(m, mem);
        CHECK(cc.total_pairs() == doctest::Approx(static_cast<double>(n / 2)));
    }
}

TEST_CASE("null moments: two-sample expectation at N=4") {
    const CrossMoments m = crossmatch_null_moments({2, 2});
    CHECK(m.mean[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(m.cov[0] == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("null moments against exhaustive enumeration") {
    for (const auto& sizes : std::vector<std::vector<std::size_t>>{
             {2, 2}, {3, 3}, {2, 4}, {4, 4}, {1, 5}, {2, 2, 2}, {1, 2, 3}, {2, 2, 2, 2},
             {1, 1, 2, 4}}) {
        const CrossMoments got = crossmatch_null_moments(sizes);
        const auto want = oracles::permutation_cross_moments(sizes);
        for (std::size_t i = 0; i < got.mean.size(); ++i) {
            CHECK(std::abs(got.mean[i] - want.mean[i]) < 1e-10);
        }
        for (std::size_t i = 0; i < got.cov.size(); ++i) {
            CHECK(std::abs(got.cov[i] - want.cov[i]) < 1e-10);
        }
    }
}

TEST_CASE("equal sizes give identical cross expectations at k=4") {
    const CrossMoments m = crossmatch_null_moments({3, 3, 3, 3});
    for (std::size_t a = 1; a < m.mean.size(); ++a) {
        CHECK(m.mean[a] == doctest::Approx(m.mean[0]).epsilon(1e-12));
    }
}

TEST_CASE("petrie on separated clusters is strongly negative") {
    // Two clusters with huge cross-distances: no cross pairs.
    const std::size_t n = 4;
    DistanceMatrix D(2 * n, Metric::Hamming);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        for (std::size_t j = i + 1; j < 2 * n; ++j) {
            const bool same = (i < n) == (j < n);
            D.set(i, j, same ? 1.0 : 50.0);
        }
    }
    const Matching m = min_weight_matching(D);
    std::vector<int> mem(2 * n, 1);
    for (std::size_t i = n; i < 2 * n; ++i) mem[i] = 2;
    const SimilarityOutcome out = petrie_statistic(m, mem, {n, n}, 2 * n);
    REQUIRE(out.ok());
    CHECK(out.diagnostics.at("a12") == 0.0);
    CHECK(out.statistic < -2.0);
    CHECK(out.direction == Direction::HighMeansSimilar);
}

TEST_CASE("petrie matches hand computation from the null moments") {
    Rng rng(311);
    const PooledSample pooled = random_pool({5, 5}, 4, 2, rng);
    const DistanceMatrix D = distance_matrix(pooled, Metric::EuclideanDummy);
    const Matching m = min_weight_matching(D);
    const CrossCounts cc = cross_counts(m, pooled.membership);
    const CrossMoments mom = crossmatch_null_moments(pooled.sizes);
    const double z = (cc.cross_at(0, 1) - mom.mean[0]) / std::sqrt(mom.cov[0]);
    const SimilarityOutcome out = petrie_statistic(pooled, Metric::EuclideanDummy);
    REQUIRE(out.ok());
    CHECK(out.statistic == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("mmcm equals petrie squared for two samples") {
    Rng rng(313);
    for (int trial = 0; trial < 25; ++trial) {
        const PooledSample pooled = random_pool({4 + rng.next_below(4), 4 + rng.next_below(4)}, 3,
                                                2, rng);
        const auto petrie = petrie_statistic(pooled, Metric::EuclideanDummy);
        const auto mmcm = mmcm_statistic(pooled, Metric::EuclideanDummy);
        if (petrie.ok() && mmcm.ok()) {
            CHECK(mmcm.statistic ==
                  doctest::Approx(petrie.statistic * petrie.statistic).epsilon(1e-10));
        }
    }
}

TEST_CASE("binary p=2 matching is flagged as tie dominated") {
    Rng rng(317);
    const PooledSample pooled = random_pool({10, 10}, 2, 2, rng);
    const SimilarityOutcome out = petrie_statistic(pooled, Metric::EuclideanDummy);
    REQUIRE(out.ok());
    CHECK(out.diagnostics.count("tie-dominated-matching") == 1);

    const PooledSample wide = random_pool({10, 10}, 8, 2, rng);
    const SimilarityOutcome out2 = petrie_statistic(wide, Metric::EuclideanDummy);
    REQUIRE(out2.ok());
    CHECK(out2.diagnostics.count("tie-dominated-matching") == 0);
}

TEST_CASE("identical tiny datasets keep mmcm finite and moderate") {
    // Monte Carlo sanity: same distribution in both samples.
    Rng rng(331);
    double acc = 0.0;
    int ok_count = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const PooledSample pooled = random_pool({6, 6}, 3, 2, rng);
        const auto out = mmcm_statistic(pooled, Metric::EuclideanDummy);
        if (out.ok()) {
            acc += out.statistic;
            ++ok_count;
        }
    }
    REQUIRE(ok_count > reps / 2);
    const double mean_stat = acc / ok_count;
    // Chi-square-ish statistic with df=1: mean near 1, generous band.
    CHECK(mean_stat > 0.05);
    CHECK(mean_stat < 6.0);
}

TEST_CASE("k=4 equal sizes: mmcm near its degrees of freedom on average") {
    Rng rng(337);
    double acc = 0.0;
    int ok_count = 0;
    const int reps = 120;
    for (int r = 0; r < reps; ++r) {
        const PooledSample pooled = random_pool({5, 5, 5, 5}, 4, 2, rng);
        const auto out = mmcm_statistic(pooled, Metric::EuclideanDummy);
        if (out.ok()) {
            acc += out.statistic;
            ++ok_count;
        }
    }
    REQUIRE(ok_count > reps / 2);
    const double mean_stat = acc / ok_count;
    // df = 6; the deterministic tie-following matching inflates this, so the
    // band is wide on purpose.
    CHECK(mean_stat > 1.0);
    CHECK(mean_stat < 40.0);
}

TEST_CASE("permuted policy removes the tie-order artifact on average") {
    // Binary p=2 data: the deterministic matching walks the sample order, so
    // a12 is inflated; over random permutations its mean approaches E[a12].
    Rng rng(347);
    const std::size_t n = 8;
    const PooledSample pooled = random_pool({n, n}, 2, 2, rng);
    const DistanceMatrix D = distance_matrix(pooled, Metric::EuclideanDummy);
    const CrossMoments mom = crossmatch_null_moments(pooled.sizes);

    const int seeds = 300;
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const Matching m = min_weight_matching(D, MatchPolicy::permuted_with(s));
        acc += cross_counts(m, pooled.membership).cross_at(0, 1);
    }
    const double mean_a12 = acc / seeds;
    const double sd = std::sqrt(mom.cov[0]);
    // Mean over seeds within 3 s.e. of the null expectation. The spread over
    // seeds is bounded by the permutation-null sd.
    CHECK(std::abs(mean_a12 - mom.mean[0]) <= 3.0 * sd / std::sqrt(static_cast<double>(seeds)) +
                                                  0.35 * sd);
}
