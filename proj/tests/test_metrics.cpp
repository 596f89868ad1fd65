#include "kgraph/error.hpp"
#include "kgraph/metrics.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace kgraph;

namespace {

double entropy(const std::vector<int>& a) {
    std::map<int, double> c;
    for (int v : a)
        c[v] += 1.0;
    double h = 0.0;
    for (const auto& [k, v] : c) {
        const double p = v / static_cast<double>(a.size());
        h -= p * std::log(p);
    }
    return h;
}

std::vector<int> permuted(const std::vector<int>& a) {
    std::vector<int> out;
    for (int v : a)
        out.push_back(7 - 3 * v);
    return out;
}

} // namespace

TEST_CASE("rand index") {
    const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1};
    CHECK(rand_index(a, a) == 1.0);
    CHECK(rand_index(a, b) == doctest::Approx(2.0 / 6.0));
    CHECK(rand_index(a, permuted(b)) == rand_index(a, b));
    CHECK_THROWS_AS(rand_index(a, std::vector<int>{0, 1}), Error);
    CHECK_THROWS_AS(rand_index(std::vector<int>{0}, std::vector<int>{0}), Error);
}

TEST_CASE("adjusted rand index") {
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(adjusted_rand_index(a, a) == 1.0);
    CHECK(adjusted_rand_index(a, std::vector<int>{1, 1, 0, 0}) == doctest::Approx(1.0));
    const std::vector<int> ones(6, 3);
    CHECK(adjusted_rand_index(ones, ones) == 1.0);
}

TEST_CASE("ARI and RI match pair enumeration for every small labeling") {
    // Exhaustive over all pairs of set partitions for n <= 6 (the indices
    // are invariant to renaming), random beyond that up to n = 12.
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto all = oracle::all_labelings(n);
        for (const auto& a : all)
            for (const auto& b : all) {
                REQUIRE(adjusted_rand_index(a, b) == doctest::Approx(oracle::pair_ari(a, b)).epsilon(1e-12));
                REQUIRE(rand_index(a, b) == doctest::Approx(oracle::pair_rand(a, b)).epsilon(1e-12));
                ++cases;
            }
    }
    Rng rng(3);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 7 + rng.index(6);
        const auto a = testing::random_labels(rng, n, 1 + static_cast<int>(rng.index(5)));
        const auto b = testing::random_labels(rng, n, 1 + static_cast<int>(rng.index(5)));
        REQUIRE(adjusted_rand_index(a, b) == doctest::Approx(oracle::pair_ari(a, b)).epsilon(1e-12));
        ++cases;
    }
    CHECK(cases > 1000);
}

TEST_CASE("ARI is near zero for independent labelings") {
    Rng rng(42);
    double sum = 0.0;
    for (int trial = 0; trial < 200; ++trial)
        sum += adjusted_rand_index(testing::random_labels(rng, 500, 4), testing::random_labels(rng, 500, 4));
    CHECK(std::abs(sum / 200.0) < 0.02);
}

TEST_CASE("NMI and AMI") {
    const std::vector<int> a{0, 0, 1, 1, 2, 2};
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(ami(a, a) == doctest::Approx(1.0));
    const std::vector<int> flat(6, 0);
    CHECK(nmi(a, flat) == 0.0);
    CHECK(ami(a, flat) == doctest::Approx(0.0));
    CHECK(nmi(flat, flat) == 1.0);
    CHECK(ami(flat, flat) == 1.0);
    // Reference values from scikit-learn (arithmetic normalization).
    const std::vector<int> x{0, 0, 0, 1, 1, 1, 2, 2}, y{0, 0, 1, 1, 2, 2, 2, 2};
    CHECK(nmi(x, y) == doctest::Approx(0.5300257549140327).epsilon(1e-9));
    CHECK(ami(x, y) == doctest::Approx(0.2745416497368333).epsilon(1e-9));
}

TEST_CASE("mutual information matches entropies for identical labels") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_labels(rng, 30, 4);
        CHECK(mutual_information(a, a) == doctest::Approx(entropy(a)));
    }
}

TEST_CASE("metric symmetry, relabeling and AMI bound") {
    Rng rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.index(60);
        const auto a = testing::random_labels(rng, n, 1 + static_cast<int>(rng.index(6)));
        const auto b = testing::random_labels(rng, n, 1 + static_cast<int>(rng.index(6)));
        REQUIRE(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
        REQUIRE(ami(a, b) <= nmi(a, b) + 1e-12);
        REQUIRE(nmi(a, permuted(b)) == doctest::Approx(nmi(a, b)).epsilon(1e-12));
        REQUIRE(ami(permuted(a), b) == doctest::Approx(ami(a, b)).epsilon(1e-12));
        REQUIRE(adjusted_rand_index(permuted(a), b) == doctest::Approx(adjusted_rand_index(a, b)).epsilon(1e-12));
        REQUIRE(rand_index(a, permuted(b)) == doctest::Approx(rand_index(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("AMI stays finite for thousands of items") {
    Rng rng(4);
    const auto a = testing::random_labels(rng, 5000, 8);
    auto b = a;
    for (std::size_t i = 0; i < b.size(); i += 3)
        b[i] = static_cast<int>(rng.index(8));
    const double v = ami(a, b);
    CHECK(std::isfinite(v));
    CHECK(v > 0.3);
    CHECK(v < 1.0);
}

TEST_CASE("contingency table marginals") {
    const auto t = ContingencyTable::from_labels(std::vector<int>{5, 5, 9, 9, 9}, std::vector<int>{1, 2, 2, 2, 1});
    CHECK(t.total == 5);
    CHECK(t.row_sums == std::vector<std::size_t>{2, 3});
    CHECK(t.col_sums == std::vector<std::size_t>{2, 3});
    CHECK(t.counts[1][1] == 2);
}

TEST_CASE("score_all bundles the four metrics") {
    const std::vector<int> a{0, 0, 1, 1, 2}, b{1, 1, 0, 0, 0};
    const MetricScores s = score_all(a, b);
    CHECK(s.ri == rand_index(a, b));
    CHECK(s.ari == adjusted_rand_index(a, b));
    CHECK(s.nmi == nmi(a, b));
    CHECK(s.ami == ami(a, b));
}
