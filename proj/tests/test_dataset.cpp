#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "datasim/csv.hpp"
#include "datasim/dataset.hpp"
#include "datasim/rng.hpp"

#include <algorithm>

using namespace datasim;

TEST_CASE("construction enforces invariants") {
    CHECK_THROWS(CategoricalDataset({0, 1}, 2, 1, {1}));             // arity < 2
    CHECK_THROWS(CategoricalDataset({0, 2}, 2, 1, {2}));             // code out of range
    CHECK_THROWS(CategoricalDataset({0, 1}, 2, 1, {2}, {{0, 2}}));   // non-binary target
    CHECK_NOTHROW(CategoricalDataset({0, 1}, 2, 1, {2}, {{0, 1}}));
}

TEST_CASE("csv loading maps string categories by sorted order") {
    const auto r = parse_csv_text("x\nb\na\nb\n", false);
    CHECK(r.dataset.rows() == 3);
    CHECK(r.dataset.cols() == 1);
    CHECK(r.dataset.arities()[0] == 2);
    CHECK(r.dataset.at(0, 0) == 1);  // "b"
    CHECK(r.dataset.at(1, 0) == 0);  // "a"
    CHECK(r.label_maps[0] == std::vector<std::string>{"a", "b"});
}

TEST_CASE("csv loading rejects malformed input") {
    CHECK_THROWS_WITH_AS(parse_csv_text("a,b\n0,1\n1,1\n", false),
                         doctest::Contains("arity<2"), std::invalid_argument);
    CHECK_THROWS(parse_csv_text("", false));
    CHECK_THROWS(parse_csv_text("x\n", false));                 // no data rows
    CHECK_THROWS(parse_csv_text("a,b\n0\n", false));            // ragged
    CHECK_THROWS(parse_csv_text("a\n0.5\n1.0\n", false));       // real-valued cell
}

TEST_CASE("csv loading with target") {
    const auto r = parse_csv_text("x,y\n0,1\n1,0\n0,1\n", true);
    CHECK(r.dataset.cols() == 1);
    REQUIRE(r.dataset.has_target());
    CHECK(r.dataset.target() == std::vector<Code>{1, 0, 1});
    CHECK_THROWS(parse_csv_text("x,y\n0,2\n1,0\n", true));
}

TEST_CASE("csv single column example") {
    const auto r = parse_csv_text("x\n0\n1\n0\n", false);
    CHECK(r.dataset.rows() == 3);
    CHECK(r.dataset.cols() == 1);
    CHECK(r.dataset.arities() == std::vector<Code>{2});
}

TEST_CASE("pooling concatenates in order and records sizes") {
    CategoricalDataset a({0, 1, 1, 0, 0, 1}, 3, 2, {2, 2});
    CategoricalDataset b({1, 1, 0, 0, 1, 0}, 3, 2, {2, 2});
    const PooledSample p = pool({a, b});
    CHECK(p.total() == 6);
    CHECK(p.sizes == std::vector<std::size_t>{3, 3});
    CHECK(p.membership == std::vector<int>{1, 1, 1, 2, 2, 2});

    CategoricalDataset c({0}, 1, 1, {2});
    CHECK_THROWS(pool({a}));
    CHECK_THROWS(pool({a, c}));  // arity mismatch
}

TEST_CASE("pool of four keeps size order") {
    std::vector<CategoricalDataset> ds;
    const std::size_t sizes[] = {10, 20, 30, 40};
    for (std::size_t s : sizes) {
        ds.emplace_back(std::vector<Code>(s, 0), s, 1, std::vector<Code>{2});
    }
    const PooledSample p = pool(ds);
    CHECK(p.sizes == std::vector<std::size_t>{10, 20, 30, 40});
    CHECK(p.total() == 100);
}

TEST_CASE("pool/split round-trips bit-exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CategoricalDataset> ds;
        const std::size_t k = 2 + rng.next_below(3);
        const std::size_t p = 1 + rng.next_below(4);
        std::vector<Code> arities;
        for (std::size_t j = 0; j < p; ++j) arities.push_back(2 + static_cast<Code>(rng.next_below(4)));
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t n = 1 + rng.next_below(6);
            std::vector<Code> v(n * p);
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = static_cast<Code>(rng.next_below(static_cast<std::uint64_t>(arities[i % p])));
            }
            ds.emplace_back(std::move(v), n, p, arities);
        }
        const PooledSample pooled = pool(ds);
        const auto back = split(pooled);
        REQUIRE(back.size() == ds.size());
        for (std::size_t s = 0; s < k; ++s) {
            CHECK(back[s].values() == ds[s].values());
            CHECK(back[s].arities() == ds[s].arities());
        }
        const PooledSample again = pool(back);
        CHECK(again.data.values() == pooled.data.values());
        CHECK(again.membership == pooled.membership);
    }
}

TEST_CASE("category code mapping is row-permutation invariant") {
    const auto a = parse_csv_text("x,y\nred,1\nblue,2\ngreen,1\n", false);
    const auto b = parse_csv_text("x,y\ngreen,1\nred,1\nblue,2\n", false);
    CHECK(a.label_maps == b.label_maps);
}
