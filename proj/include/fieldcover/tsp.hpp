#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fieldcover/errors.hpp"
#include "fieldcover/geometry.hpp"
#include "fieldcover/matching.hpp"

namespace fieldcover {

// Closed cycle over a point set: visiting order plus Euclidean length.
struct Tour {
    std::vector<int> order;
    double length = 0.0;
};

/// len(T) = sum of consecutive distances plus the closing edge.
inline double tour_length(std::span<const int> order, std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (order.size() != n) throw std::invalid_argument("tour_length: order is not a permutation");
    std::vector<char> seen(n, 0);
    for (int v : order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("tour_length: order is not a permutation");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
    if (n <= 1) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        len += distance(points[static_cast<std::size_t>(order[i])], points[static_cast<std::size_t>(order[(i + 1) % n])]);
    }
    return len;
}

enum class MatchingMode { kExact, kGreedy };

struct ChristofidesOptions {
    MatchingMode matching = MatchingMode::kExact;
    // Odd-vertex count above which exact mode falls back to the greedy
    // matching; the 3/2 guarantee is forfeited and the result says so.
    std::size_t greedy_fallback_threshold = 5000;
};

struct ChristofidesResult {
    Tour tour;
    MatchingMode matching_used = MatchingMode::kExact;
};

namespace detail {

// Prim over the complete Euclidean graph, O(n^2).
inline std::vector<std::pair<int, int>> euclidean_mst(std::span<const Point2> pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::pair<int, int>> edges;
    if (n <= 1) return edges;
    std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<int> from(static_cast<std::size_t>(n), 0);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    best[0] = 0.0;
    for (int it = 0; it < n; ++it) {
        int u = -1;
        double bu = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            if (!used[static_cast<std::size_t>(v)] && best[static_cast<std::size_t>(v)] < bu) {
                bu = best[static_cast<std::size_t>(v)];
                u = v;
            }
        }
        used[static_cast<std::size_t>(u)] = 1;
        if (u != 0) edges.emplace_back(from[static_cast<std::size_t>(u)], u);
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            const double d = squared_distance(pts[static_cast<std::size_t>(u)], pts[static_cast<std::size_t>(v)]);
            if (d < best[static_cast<std::size_t>(v)]) {
                best[static_cast<std::size_t>(v)] = d;
                from[static_cast<std::size_t>(v)] = u;
            }
        }
    }
    return edges;
}

// Hierholzer circuit over a connected even-degree multigraph.
inline std::vector<int> euler_circuit(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));  // (neighbour, edge id)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const auto [a, b] = edges[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(a)].emplace_back(b, e);
        adj[static_cast<std::size_t>(b)].emplace_back(a, e);
    }
    std::vector<char> used_edge(edges.size(), 0);
    std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    std::vector<int> circuit;
    while (!stack.empty()) {
        const int v = stack.back();
        auto& ptr = next[static_cast<std::size_t>(v)];
        bool advanced = false;
        while (ptr < adj[static_cast<std::size_t>(v)].size()) {
            const auto [to, id] = adj[static_cast<std::size_t>(v)][ptr];
            ++ptr;
            if (used_edge[static_cast<std::size_t>(id)]) continue;
            used_edge[static_cast<std::size_t>(id)] = 1;
            stack.push_back(to);
            advanced = true;
            break;
        }
        if (!advanced) {
            circuit.push_back(v);
            stack.pop_back();
        }
    }
    return circuit;
}

}  // namespace detail

// Christofides pipeline: MST, exact minimum-weight perfect matching on the
// odd-degree vertices, Euler circuit, first-visit shortcut. Length is at
// most 3/2 the optimum when the exact matching runs.
inline ChristofidesResult christofides(std::span<const Point2> points, const ChristofidesOptions& options = {}) {
    const int n = static_cast<int>(points.size());
    if (n < 1) throw std::invalid_argument("christofides: need at least one point");
    ChristofidesResult result;
    if (n == 1) {
        result.tour = Tour{{0}, 0.0};
        return result;
    }
    if (n == 2) {
        result.tour = Tour{{0, 1}, 2.0 * distance(points[0], points[1])};
        return result;
    }
    auto edges = detail::euclidean_mst(points);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : edges) {
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
    }
    std::vector<int> odd;
    for (int v = 0; v < n; ++v) {
        if (degree[static_cast<std::size_t>(v)] % 2 == 1) odd.push_back(v);
    }
    if (odd.size() % 2 != 0) throw std::logic_error("christofides: odd-degree set must have even size");

    const auto cost = [&](int i, int j) {
        return distance(points[static_cast<std::size_t>(odd[static_cast<std::size_t>(i)])],
                        points[static_cast<std::size_t>(odd[static_cast<std::size_t>(j)])]);
    };
    std::vector<int> mate;
    if (options.matching == MatchingMode::kExact && odd.size() <= options.greedy_fallback_threshold) {
        mate = minimum_weight_perfect_matching(static_cast<int>(odd.size()), cost);
        result.matching_used = MatchingMode::kExact;
    } else {
        mate = greedy_perfect_matching(static_cast<int>(odd.size()), cost);
        result.matching_used = MatchingMode::kGreedy;
    }
    for (int i = 0; i < static_cast<int>(odd.size()); ++i) {
        if (mate[static_cast<std::size_t>(i)] > i) {
            edges.emplace_back(odd[static_cast<std::size_t>(i)], odd[static_cast<std::size_t>(mate[static_cast<std::size_t>(i)])]);
        }
    }
    const std::vector<int> circuit = detail::euler_circuit(n, edges);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int v : circuit) {
        if (!visited[static_cast<std::size_t>(v)]) {
            visited[static_cast<std::size_t>(v)] = 1;
            order.push_back(v);
        }
    }
    result.tour.length = tour_length(order, points);
    result.tour.order = std::move(order);
    return result;
}

// 2-opt local search; never lengthens the tour and stops at a local optimum
// or after the pass cap (default scales the cap so a pass budget of ~1e9
// pair probes is kept on large instances).
inline Tour two_opt(const Tour& tour, std::span<const Point2> points, std::size_t max_passes = 0) {
    const std::size_t n = tour.order.size();
    Tour out;
    out.order = tour.order;
    if (n < 4) {
        out.length = tour_length(out.order, points);
        return out;
    }
    if (max_passes == 0) {
        const double budget = 1.0e9 / (static_cast<double>(n) * static_cast<double>(n) + 1.0);
        max_passes = static_cast<std::size_t>(std::clamp(budget, 2.0, 60.0));
    }
    auto& ord = out.order;
    const auto pt = [&](std::size_t i) { return points[static_cast<std::size_t>(ord[i])]; };
    const double eps = 1e-12 * std::max(1.0, tour.length);
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const Point2 a = pt(i);
            const Point2 b = pt(i + 1);
            const double d_ab = distance(a, b);
            const std::size_t j_end = (i == 0) ? n - 1 : n;
            for (std::size_t j = i + 2; j < j_end; ++j) {
                const Point2 c = pt(j);
                const Point2 e = pt((j + 1) % n);
                const double delta = distance(a, c) + distance(b, e) - d_ab - distance(c, e);
                if (delta < -eps) {
                    std::reverse(ord.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                 ord.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    improved = true;
                    break;  // a-b edge changed; restart this i
                }
            }
        }
        if (!improved) break;
    }
    out.length = tour_length(ord, points);
    return out;
}

/// Exact TSP by Held-Karp dynamic programming; guarded to 15 points.
inline Tour held_karp_exact(std::span<const Point2> points) {
    const int n = static_cast<int>(points.size());
    if (n > 15) throw SizeLimitError("held_karp_exact: limited to 15 points");
    if (n < 1) throw std::invalid_argument("held_karp_exact: need at least one point");
    if (n == 1) return Tour{{0}, 0.0};
    const std::size_t full = std::size_t{1} << n;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full * static_cast<std::size_t>(n), inf);
    std::vector<std::int8_t> parent(full * static_cast<std::size_t>(n), -1);
    const auto idx = [&](std::size_t mask, int j) { return mask * static_cast<std::size_t>(n) + static_cast<std::size_t>(j); };
    dp[idx(1, 0)] = 0.0;
    std::vector<std::vector<double>> dist(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                distance(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
        }
    }
    for (std::size_t mask = 1; mask < full; ++mask) {
        if (!(mask & 1)) continue;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double cur = dp[idx(mask, j)];
            if (cur == inf) continue;
            for (int k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t nmask = mask | (std::size_t{1} << k);
                const double cand = cur + dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (cand < dp[idx(nmask, k)]) {
                    dp[idx(nmask, k)] = cand;
                    parent[idx(nmask, k)] = static_cast<std::int8_t>(j);
                }
            }
        }
    }
    const std::size_t all = full - 1;
    double best = inf;
    int best_j = 0;
    for (int j = 1; j < n; ++j) {
        const double cand = dp[idx(all, j)] + dist[static_cast<std::size_t>(j)][0];
        if (cand < best) {
            best = cand;
            best_j = j;
        }
    }
    std::vector<int> order;
    std::size_t mask = all;
    int j = best_j;
    while (j != -1) {
        order.push_back(j);
        const int pj = parent[idx(mask, j)];
        mask &= ~(std::size_t{1} << j);
        j = pj;
    }
    std::reverse(order.begin(), order.end());
    Tour t;
    t.order = std::move(order);
    t.length = tour_length(t.order, points);
    return t;
}

}  // namespace fieldcover
