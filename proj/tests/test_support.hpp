#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fieldcover/geometry.hpp"

namespace testsupport {

using fieldcover::Point2;

// Andrew monotone chain; returns CCW hull without the closing point.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && fieldcover::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && fieldcover::cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline std::vector<Point2> random_convex_polygon(std::mt19937_64& rng, double radius, Point2 center = {0.0, 0.0},
                                                 int candidates = 12) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * fieldcover::kPi);
    std::uniform_real_distribution<double> rad(0.4 * radius, radius);
    std::vector<Point2> pts;
    for (int i = 0; i < candidates; ++i) {
        const double a = angle(rng);
        const double r = rad(rng);
        pts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    auto hull = convex_hull(pts);
    while (hull.size() < 3) {
        pts.push_back({center.x + rad(rng) * std::cos(angle(rng)), center.y + rad(rng) * std::sin(angle(rng))});
        hull = convex_hull(pts);
    }
    return hull;
}

/// Distance from `p` to the nearest edge line of a CCW convex polygon
/// (positive when p is strictly inside every edge half-plane).
inline double inradius_at(const std::vector<Point2>& poly, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % poly.size()];
        const Point2 e = b - a;
        const double len = fieldcover::norm(e);
        best = std::min(best, fieldcover::cross(e, p - a) / len);
    }
    return best;
}

}  // namespace testsupport
