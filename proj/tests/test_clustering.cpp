#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uavplace/clustering.hpp"
#include "uavplace/errors.hpp"

using namespace uavplace;

namespace {

PointList random_points(oracles::TestRng& rng, int n, double lo, double hi) {
    PointList pts(n, 2);
    for (int i = 0; i < n; ++i) {
        pts(i, 0) = rng.uniform(lo, hi);
        pts(i, 1) = rng.uniform(lo, hi);
    }
    return pts;
}

Eigen::MatrixXd random_cost(oracles::TestRng& rng, int n, int k) {
    Eigen::MatrixXd cost(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) cost(i, j) = rng.uniform(0.0, 100.0);
    return cost;
}

void check_balance(const std::vector<int>& labels, int n, int k) {
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
        REQUIRE(l >= 0);
        REQUIRE(l < k);
        ++size[static_cast<std::size_t>(l)];
    }
    const int base = n / k, extra = n % k;
    int at_ceil = 0;
    for (int s : size) {
        CHECK((s == base || s == base + 1));
        if (s == base + 1) ++at_ceil;
    }
    CHECK(at_ceil == (extra == 0 ? 0 : extra));
    if (extra == 0)
        for (int s : size) CHECK(s == base);
}

}  // namespace

TEST_CASE("balanced assignment: deterministic tie-breaking on a degenerate matrix") {
    const Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(4, 2);
    const auto labels = clustering::balanced_assignment(cost);
    CHECK(labels == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("balanced assignment is exactly optimal (n=8, k=2: all 70 splits)") {
    oracles::TestRng rng(201);
    for (int t = 0; t < 50; ++t) {
        const auto cost = random_cost(rng, 8, 2);
        const auto labels = clustering::balanced_assignment(cost);
        check_balance(labels, 8, 2);
        long n_labelings = 0;
        const double want = oracles::brute_balanced_cost(cost, 2, &n_labelings);
        CHECK(n_labelings == 70);
        CHECK(oracles::labeling_cost(cost, labels) == want);
    }
}

TEST_CASE("balanced assignment is exactly optimal (n=7, k=3: uneven sizes)") {
    oracles::TestRng rng(202);
    for (int t = 0; t < 20; ++t) {
        const auto cost = random_cost(rng, 7, 3);
        const auto labels = clustering::balanced_assignment(cost);
        check_balance(labels, 7, 3);
        CHECK(oracles::labeling_cost(cost, labels) == oracles::brute_balanced_cost(cost, 3));
    }
}

TEST_CASE("balanced assignment keeps sizes within one across fuzzed shapes") {
    oracles::TestRng rng(203);
    for (int t = 0; t < 30; ++t) {
        const int k = 1 + rng.uniform_int(20);
        const int n = k + rng.uniform_int(500 - k);
        const auto labels = clustering::balanced_assignment(random_cost(rng, n, k));
        check_balance(labels, n, k);
    }
}

TEST_CASE("balanced k-means separates two blobs and stays deterministic") {
    oracles::TestRng rng(204);
    PointList pts(8, 2);
    for (int i = 0; i < 4; ++i) {
        pts(i, 0) = rng.uniform(0.0, 10.0);
        pts(i, 1) = rng.uniform(0.0, 10.0);
        pts(i + 4, 0) = rng.uniform(900.0, 910.0);
        pts(i + 4, 1) = rng.uniform(900.0, 910.0);
    }
    const auto out = clustering::balanced_kmeans(pts, 2, 42);
    check_balance(out.labels, 8, 2);
    for (int i = 1; i < 4; ++i) {
        CHECK(out.labels[static_cast<std::size_t>(i)] == out.labels[0]);
        CHECK(out.labels[static_cast<std::size_t>(i + 4)] == out.labels[4]);
    }
    CHECK(out.labels[0] != out.labels[4]);
    CHECK(out.iterations >= 1);

    const auto again = clustering::balanced_kmeans(pts, 2, 42);
    CHECK(again.labels == out.labels);
    CHECK(again.objective == out.objective);
}

TEST_CASE("balanced k-means objective equals the reported labeling's cost") {
    oracles::TestRng rng(205);
    for (int t = 0; t < 10; ++t) {
        const int k = 2 + rng.uniform_int(4);
        const int n = k + rng.uniform_int(40);
        const auto pts = random_points(rng, n, 0.0, 1000.0);
        const auto out = clustering::balanced_kmeans(pts, k, 7 + t);
        check_balance(out.labels, n, k);
        REQUIRE(static_cast<int>(out.centroids.size()) == k);

        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            const Point2 p = pts.row(i);
            cost += (p - out.centroids[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(i)])]).norm();
        }
        CHECK(out.objective == doctest::Approx(cost).epsilon(1e-12));
        CHECK(!out.objective_trace.empty());
    }
}

TEST_CASE("balanced k-means handles degenerate inputs") {
    PointList same(5, 2);
    for (int i = 0; i < 5; ++i) same.row(i) << 7.0, 7.0;
    const auto out = clustering::balanced_kmeans(same, 3, 1);
    check_balance(out.labels, 5, 3);
    CHECK(out.objective == doctest::Approx(0.0).epsilon(1e-12));

    // n == k: singleton clusters, zero objective.
    oracles::TestRng rng(206);
    const auto pts = random_points(rng, 6, 0.0, 100.0);
    const auto singles = clustering::balanced_kmeans(pts, 6, 1);
    check_balance(singles.labels, 6, 6);
    CHECK(singles.objective == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(clustering::balanced_kmeans(pts, 0, 1), InvalidKError);
    CHECK_THROWS_AS(clustering::balanced_kmeans(pts, 7, 1), InvalidKError);
    CHECK_THROWS_AS(clustering::balanced_kmeans(pts, 2, 1, 0), InvalidKError);
    CHECK_THROWS_AS(clustering::balanced_kmeans(PointList(0, 2), 1, 1), InvalidKError);
}

TEST_CASE("exhaustive capacitated clustering matches the labeling enumeration") {
    oracles::TestRng rng(207);
    int infeasible_seen = 0;
    for (int t = 0; t < 40; ++t) {
        const int n = 3 + rng.uniform_int(6);
        const int k = 1 + rng.uniform_int(std::min(3, n));
        const auto pts = random_points(rng, n, 0.0, 100.0);
        std::vector<double> rates(static_cast<std::size_t>(n));
        for (auto& r : rates) r = rng.uniform(0.5, 1.5);
        std::vector<double> caps(static_cast<std::size_t>(k));
        for (auto& c : caps) c = (static_cast<double>(n) / k) * rng.uniform(0.6, 1.6);

        const auto want = oracles::brute_ccp_cost(pts, k, caps, rates);
        if (!want) {
            ++infeasible_seen;
            CHECK_THROWS_AS(clustering::ccp_exact(pts, k, caps, rates), InfeasibleError);
            continue;
        }
        const auto got = clustering::ccp_exact(pts, k, caps, rates);
        CHECK(got.objective == doctest::Approx(*want).epsilon(1e-9));
        std::vector<double> load(static_cast<std::size_t>(k), 0.0);
        for (int i = 0; i < n; ++i)
            load[static_cast<std::size_t>(got.labels[static_cast<std::size_t>(i)])] +=
                rates[static_cast<std::size_t>(i)];
        for (int j = 0; j < k; ++j)
            CHECK(load[static_cast<std::size_t>(j)] <= caps[static_cast<std::size_t>(j)] + 1e-9);
    }
    // The capacity draw must actually exercise the infeasible branch sometimes.
    CHECK(infeasible_seen > 0);
}

TEST_CASE("capacitated clustering reference: edge shapes and errors") {
    oracles::TestRng rng(208);
    const auto pts = random_points(rng, 4, 0.0, 10.0);
    const std::vector<double> rates{1.0, 1.0, 1.0, 1.0};

    // k=1 with slack capacity: everything in one cluster.
    const auto one = clustering::ccp_exact(pts, 1, {100.0}, rates);
    CHECK(one.labels == std::vector<int>{0, 0, 0, 0});

    // Two far points, k=2: one each.
    PointList pair(2, 2);
    pair.row(0) << 0.0, 0.0;
    pair.row(1) << 1000.0, 0.0;
    const auto two = clustering::ccp_exact(pair, 2, {10.0, 10.0}, {1.0, 1.0});
    CHECK(two.labels[0] != two.labels[1]);
    CHECK(two.objective == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(clustering::ccp_exact(pts, 0, {}, rates), InvalidKError);
    CHECK_THROWS_AS(clustering::ccp_exact(pts, 5, std::vector<double>(5, 1.0), rates),
                    InvalidKError);
    CHECK_THROWS_AS(clustering::ccp_exact(pts, 2, {1.0}, rates), InvalidKError);  // caps size
    PointList big(13, 2);
    big.setZero();
    CHECK_THROWS_AS(
        clustering::ccp_exact(big, 2, {100.0, 100.0}, std::vector<double>(13, 1.0)),
        InvalidKError);
    CHECK_THROWS_AS(clustering::ccp_exact(pts, 2, {0.1, 0.1}, rates), InfeasibleError);
}

TEST_CASE("heuristic never beats the exact reference when capacities are slack") {
    oracles::TestRng rng(209);
    for (int t = 0; t < 8; ++t) {
        const int n = 6 + rng.uniform_int(4);
        const int k = 2 + rng.uniform_int(2);
        const auto pts = random_points(rng, n, 0.0, 500.0);
        const std::vector<double> rates(static_cast<std::size_t>(n), 1.0);
        const std::vector<double> caps(static_cast<std::size_t>(k), 1e9);

        const auto heur = clustering::balanced_kmeans(pts, k, 3 + t);
        const auto exact = clustering::ccp_exact(pts, k, caps, rates);
        CHECK(heur.objective >= exact.objective - 1e-9);
    }
}
