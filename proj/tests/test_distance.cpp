#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "datasim/distance.hpp"
#include "datasim/rng.hpp"

#include <cmath>

using namespace datasim;

namespace {

CategoricalDataset random_binary(std::size_t n, std::size_t p, Rng& rng) {
    std::vector<Code> v(n * p);
    for (auto& c : v) c = static_cast<Code>(rng.next_below(2));
    return CategoricalDataset(std::move(v), n, p, std::vector<Code>(p, 2));
}

} // namespace

TEST_CASE("hamming basics") {
    const Code a[] = {0, 1, 1};
    const Code b[] = {0, 0, 1};
    CHECK(hamming(a, b, 3) == 1);
    CHECK(hamming(a, a, 3) == 0);
    const Code c[] = {0, 1};
    const Code d[] = {1, 0};
    CHECK(hamming(c, d, 2) == 2);
}

TEST_CASE("dummy encoding uses code 0 as reference") {
    // Binary column (0,1,0) -> single indicator column.
    CategoricalDataset bin({0, 1, 0}, 3, 1, {2});
    CHECK(dummy_encode(bin) == std::vector<double>{0, 1, 0});

    // Arity-5 code 3 -> indicators (0,0,1,0).
    CategoricalDataset five({3}, 1, 1, {5});
    CHECK(dummy_encode(five) == std::vector<double>{0, 0, 1, 0});

    // p=2 binary row (1,1) -> (1,1).
    CategoricalDataset two({1, 1}, 1, 2, {2, 2});
    CHECK(dummy_encode(two) == std::vector<double>{1, 1});
}

TEST_CASE("distance matrix under both metrics") {
    CategoricalDataset d({0, 0, 1, 1}, 2, 2, {2, 2});
    const DistanceMatrix h = distance_matrix(d, Metric::Hamming);
    const DistanceMatrix e = distance_matrix(d, Metric::EuclideanDummy);
    CHECK(h.at(0, 1) == 2.0);
    CHECK(e.at(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(h.at(0, 0) == 0.0);
    CHECK(e.at(1, 1) == 0.0);
}

TEST_CASE("euclidean-dummy squared equals hamming on binary data") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = random_binary(8, 5, rng);
        const DistanceMatrix h = distance_matrix(d, Metric::Hamming);
        const DistanceMatrix e = distance_matrix(d, Metric::EuclideanDummy);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = 0; j < 8; ++j) {
                CHECK(e.at(i, j) * e.at(i, j) == doctest::Approx(h.at(i, j)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("euclidean-dummy matches the explicit encoding for higher arities") {
    Rng rng(9);
    std::vector<Code> arities{2, 5, 3};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Code> v(6 * 3);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = static_cast<Code>(rng.next_below(static_cast<std::uint64_t>(arities[i % 3])));
        }
        CategoricalDataset d(std::move(v), 6, 3, arities);
        const auto x = dummy_encode(d);
        const std::size_t w = d.dummy_width();
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                double sq = 0.0;
                for (std::size_t c = 0; c < w; ++c) {
                    const double diff = x[i * w + c] - x[j * w + c];
                    sq += diff * diff;
                }
                CHECK(row_distance(d, i, j, Metric::EuclideanDummy) ==
                      doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("hamming triangle inequality on random triples") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_binary(3, 6, rng);
        const int ab = hamming(d, 0, 1);
        const int bc = hamming(d, 1, 2);
        const int ac = hamming(d, 0, 2);
        CHECK(ac <= ab + bc);
    }
}
