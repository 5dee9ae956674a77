#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fieldcover/errors.hpp"
#include "fieldcover/matching.hpp"
#include "fieldcover/tsp.hpp"

using namespace fieldcover;
using Catch::Approx;

namespace {

// exact minimum-weight perfect matching by subset DP, O(2^n n)
double brute_force_matching(const std::vector<std::vector<double>>& w) {
    const int n = static_cast<int>(w.size());
    const std::size_t full = std::size_t{1} << n;
    std::vector<double> dp(full, std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (std::size_t mask = 0; mask + 1 < full; ++mask) {
        if (dp[mask] == std::numeric_limits<double>::infinity()) continue;
        int i = 0;
        while (mask & (std::size_t{1} << i)) ++i;
        for (int j = i + 1; j < n; ++j) {
            if (mask & (std::size_t{1} << j)) continue;
            const std::size_t next = mask | (std::size_t{1} << i) | (std::size_t{1} << j);
            dp[next] = std::min(dp[next], dp[mask] + w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }
    return dp[full - 1];
}

double matching_weight(const std::vector<int>& mate, const std::vector<std::vector<double>>& w) {
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(mate.size()); ++i) {
        REQUIRE(mate[static_cast<std::size_t>(i)] >= 0);
        REQUIRE(mate[static_cast<std::size_t>(mate[static_cast<std::size_t>(i)])] == i);
        if (mate[static_cast<std::size_t>(i)] > i) total += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(mate[static_cast<std::size_t>(i)])];
    }
    return total;
}

std::vector<Point2> random_points(std::mt19937_64& rng, int n, double box = 10.0) {
    std::uniform_real_distribution<double> coord(0.0, box);
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
    return pts;
}

}  // namespace

TEST_CASE("tour length examples and validation") {
    const std::vector<Point2> single{{3, 4}};
    CHECK(tour_length(std::vector<int>{0}, single) == 0.0);

    const std::vector<Point2> pair{{0, 0}, {0, 7}};
    CHECK(tour_length(std::vector<int>{0, 1}, pair) == Approx(14.0));

    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(tour_length(std::vector<int>{0, 1, 2, 3}, square) == Approx(4.0));

    CHECK_THROWS_AS(tour_length(std::vector<int>{0, 1, 1, 3}, square), std::invalid_argument);
    CHECK_THROWS_AS(tour_length(std::vector<int>{0, 1, 2}, square), std::invalid_argument);
    CHECK_THROWS_AS(tour_length(std::vector<int>{0, 1, 2, 4}, square), std::invalid_argument);
}

TEST_CASE("tour length is invariant under rotation and reversal") {
    std::mt19937_64 rng(3);
    const auto pts = random_points(rng, 9);
    std::vector<int> order(9);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const double base = tour_length(order, pts);
    std::vector<int> rotated(order.begin() + 3, order.end());
    rotated.insert(rotated.end(), order.begin(), order.begin() + 3);
    CHECK(tour_length(rotated, pts) == Approx(base));
    std::vector<int> reversed(order.rbegin(), order.rend());
    CHECK(tour_length(reversed, pts) == Approx(base));
}

TEST_CASE("blossom matching matches subset-DP optimum") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> weight(0.05, 10.0);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 * (1 + static_cast<int>(rng() % 6));  // 2..12
        std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = weight(rng);
                w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
        const auto mate = minimum_weight_perfect_matching(n, [&](int i, int j) { return w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; });
        const double got = matching_weight(mate, w);
        const double want = brute_force_matching(w);
        CHECK(got == Approx(want).margin(1e-7));
    }
}

TEST_CASE("blossom matching on Euclidean instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 * (1 + static_cast<int>(rng() % 7));  // 2..14
        const auto pts = random_points(rng, n);
        std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
        }
        const auto mate = minimum_weight_perfect_matching(n, [&](int i, int j) { return w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; });
        CHECK(matching_weight(mate, w) == Approx(brute_force_matching(w)).margin(1e-7));
    }
}

TEST_CASE("greedy matching is perfect but unguaranteed") {
    std::mt19937_64 rng(7);
    const int n = 10;
    const auto pts = random_points(rng, n);
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
    const auto mate = greedy_perfect_matching(n, [&](int i, int j) { return w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; });
    CHECK(matching_weight(mate, w) >= brute_force_matching(w) - 1e-12);
}

TEST_CASE("held-karp examples") {
    const std::vector<Point2> tri{{0, 0}, {4, 0}, {0, 3}};
    const Tour t = held_karp_exact(tri);
    CHECK(t.length == Approx(12.0));  // 3-4-5 perimeter

    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(held_karp_exact(square).length == Approx(4.0));

    CHECK(held_karp_exact(std::vector<Point2>{{2, 2}}).length == 0.0);

    std::vector<Point2> too_many(16, Point2{0, 0});
    CHECK_THROWS_AS(held_karp_exact(too_many), SizeLimitError);
}

TEST_CASE("christofides small cases") {
    CHECK(christofides(std::vector<Point2>{{1, 1}}).tour.length == 0.0);
    CHECK(christofides(std::vector<Point2>{{0, 0}, {3, 0}}).tour.length == Approx(6.0));
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto res = christofides(square);
    CHECK(res.tour.length == Approx(4.0));
    CHECK(res.matching_used == MatchingMode::kExact);
}

TEST_CASE("christofides stays within 3/2 of optimal") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 9);  // 4..12
        const auto pts = random_points(rng, n);
        const Tour optimal = held_karp_exact(pts);
        const auto res = christofides(pts);
        CHECK(res.tour.length >= optimal.length - 1e-9);
        CHECK(res.tour.length <= 1.5 * optimal.length + 1e-9);
    }
}

TEST_CASE("christofides greedy fallback triggers above the threshold") {
    std::mt19937_64 rng(8);
    const auto pts = random_points(rng, 40);
    ChristofidesOptions opts;
    opts.greedy_fallback_threshold = 2;
    const auto res = christofides(pts, opts);
    CHECK(res.matching_used == MatchingMode::kGreedy);
    CHECK(tour_length(res.tour.order, pts) == Approx(res.tour.length));

    ChristofidesOptions forced;
    forced.matching = MatchingMode::kGreedy;
    CHECK(christofides(pts, forced).matching_used == MatchingMode::kGreedy);
}

TEST_CASE("two-opt removes a crossing") {
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    // A, C, B, D ordering crosses in the middle
    Tour crossed;
    crossed.order = {0, 2, 1, 3};
    crossed.length = tour_length(crossed.order, square);
    CHECK(crossed.length > 4.0);
    const Tour fixed = two_opt(crossed, square);
    CHECK(fixed.length == Approx(4.0));
}

TEST_CASE("two-opt is monotone and idempotent at a local optimum") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 20);
        const auto pts = random_points(rng, n);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        Tour start;
        start.order = order;
        start.length = tour_length(order, pts);
        const Tour improved = two_opt(start, pts);
        CHECK(improved.length <= start.length + 1e-9);
        const Tour again = two_opt(improved, pts);
        CHECK(again.length == Approx(improved.length));
        CHECK(again.order == improved.order);
    }
}

TEST_CASE("already optimal square tour is unchanged") {
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    Tour t;
    t.order = {0, 1, 2, 3};
    t.length = 4.0;
    CHECK(two_opt(t, square).length == Approx(4.0));
}

TEST_CASE("christofides is deterministic") {
    std::mt19937_64 rng(15);
    const auto pts = random_points(rng, 30);
    const auto a = christofides(pts);
    const auto b = christofides(pts);
    CHECK(a.tour.order == b.tour.order);
    CHECK(a.tour.length == b.tour.length);
}
