#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace fieldcover {

inline constexpr double kSqrt3 = 1.7320508075688772;
inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Euclidean metric rho.
inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double squared_distance(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Aabb {
    Point2 min;
    Point2 max;
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
};

// Compact convex planar region with non-empty interior. Stored as a CCW
// vertex list; rectangles keep exact width/height for exact area.
class Environment {
public:
    static Environment rectangle(double width, double height, Point2 origin = {0.0, 0.0}) {
        if (!(width > 0.0) || !(height > 0.0)) {
            throw std::invalid_argument("Environment: rectangle sides must be positive");
        }
        Environment env;
        env.kind_ = Kind::kRectangle;
        env.rect_w_ = width;
        env.rect_h_ = height;
        env.vertices_ = {origin,
                         {origin.x + width, origin.y},
                         {origin.x + width, origin.y + height},
                         {origin.x, origin.y + height}};
        env.finish_init();
        return env;
    }

    static Environment convex_polygon(std::vector<Point2> ccw_vertices) {
        if (ccw_vertices.size() < 3) {
            throw std::invalid_argument("Environment: polygon needs at least 3 vertices");
        }
        Environment env;
        env.kind_ = Kind::kPolygon;
        env.vertices_ = std::move(ccw_vertices);
        env.validate_convex_ccw();
        env.finish_init();
        return env;
    }

    const std::vector<Point2>& vertices() const { return vertices_; }
    const Aabb& bounding_box() const { return bbox_; }

    double area() const {
        if (kind_ == Kind::kRectangle) return rect_w_ * rect_h_;
        return shoelace();
    }

    double perimeter() const {
        double p = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            p += distance(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
        }
        return p;
    }

    /// Closed-region membership, boundary inclusive.
    bool contains(Point2 p) const {
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = vertices_[i];
            const Point2 b = vertices_[(i + 1) % n];
            if (cross(b - a, p - a) < -tol_) return false;
        }
        return true;
    }

    /// Nearest point of the region (unique by convexity); p itself if contained.
    Point2 project(Point2 p) const {
        if (contains(p)) return p;
        const std::size_t n = vertices_.size();
        Point2 best{};
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = vertices_[i];
            const Point2 b = vertices_[(i + 1) % n];
            const Point2 q = closest_on_segment(p, a, b);
            const double d2 = squared_distance(p, q);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = q;
            }
        }
        return best;
    }

private:
    enum class Kind { kRectangle, kPolygon };

    static Point2 closest_on_segment(Point2 p, Point2 a, Point2 b) {
        const Point2 ab = b - a;
        const double len2 = dot(ab, ab);
        if (len2 == 0.0) return a;
        const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
        return a + t * ab;
    }

    double shoelace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Point2 a = vertices_[i];
            const Point2 b = vertices_[(i + 1) % vertices_.size()];
            s += cross(a, b);
        }
        return 0.5 * s;
    }

    void validate_convex_ccw() {
        const std::size_t n = vertices_.size();
        double scale = 0.0;
        for (const Point2& v : vertices_) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
        const double eps = 1e-12 * std::max(1.0, scale * scale);
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = vertices_[i];
            const Point2 b = vertices_[(i + 1) % n];
            const Point2 c = vertices_[(i + 2) % n];
            if (cross(b - a, c - b) < -eps) {
                throw std::invalid_argument("Environment: polygon must be convex and counter-clockwise");
            }
        }
        if (shoelace() <= eps) {
            throw std::invalid_argument("Environment: polygon must have non-empty interior");
        }
    }

    void finish_init() {
        for (const Point2& v : vertices_) {
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                throw std::invalid_argument("Environment: vertices must be finite");
            }
        }
        bbox_.min = bbox_.max = vertices_.front();
        for (const Point2& v : vertices_) {
            bbox_.min.x = std::min(bbox_.min.x, v.x);
            bbox_.min.y = std::min(bbox_.min.y, v.y);
            bbox_.max.x = std::max(bbox_.max.x, v.x);
            bbox_.max.y = std::max(bbox_.max.y, v.y);
        }
        const double diag = std::max(1.0, std::hypot(bbox_.width(), bbox_.height()));
        tol_ = 1e-9 * diag;
        if (kind_ == Kind::kPolygon && !(area() > 0.0)) {
            throw std::invalid_argument("Environment: degenerate region");
        }
    }

    Kind kind_ = Kind::kPolygon;
    std::vector<Point2> vertices_;
    Aabb bbox_{};
    double rect_w_ = 0.0;
    double rect_h_ = 0.0;
    double tol_ = 1e-9;
};

inline double area(const Environment& env) { return env.area(); }
inline double perimeter(const Environment& env) { return env.perimeter(); }
inline bool contains(const Environment& env, Point2 p) { return env.contains(p); }
inline Point2 project_to(const Environment& env, Point2 p) { return env.project(p); }

/// Axis values from lo to hi with the given step, end point always included.
inline std::vector<double> axis_steps(double lo, double hi, double step) {
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    out.reserve(count + 2);
    for (std::size_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    if (out.back() < hi - 1e-12 * std::max(1.0, std::abs(hi))) out.push_back(hi);
    else out.back() = hi;
    return out;
}

/// Row-major grid of D with the given step, boundary inclusive.
inline std::vector<Point2> environment_grid(const Environment& env, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("environment_grid: step must be positive");
    const Aabb& bb = env.bounding_box();
    const std::vector<double> xs = axis_steps(bb.min.x, bb.max.x, step);
    const std::vector<double> ys = axis_steps(bb.min.y, bb.max.y, step);
    std::vector<Point2> grid;
    grid.reserve(xs.size() * ys.size());
    for (double y : ys) {
        for (double x : xs) {
            const Point2 p{x, y};
            if (env.contains(p)) grid.push_back(p);
        }
    }
    return grid;
}

namespace detail {

// Uniform hash grid over points; query returns candidate indices near p.
class SpatialHash {
public:
    SpatialHash(std::span<const Point2> pts, double cell) : pts_(pts), cell_(cell) {
        buckets_.reserve(pts.size() * 2);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            buckets_[key(pts[i])].push_back(static_cast<int>(i));
        }
    }

    // Indices of all points within `radius` of p (radius must be <= cell_).
    template <typename Fn>
    void for_each_candidate(Point2 p, Fn&& fn) const {
        const auto cx = coord(p.x);
        const auto cy = coord(p.y);
        for (std::int64_t ix = cx - 1; ix <= cx + 1; ++ix) {
            for (std::int64_t iy = cy - 1; iy <= cy + 1; ++iy) {
                const auto it = buckets_.find(pack(ix, iy));
                if (it == buckets_.end()) continue;
                for (int idx : it->second) fn(idx);
            }
        }
    }

    std::vector<int> within(Point2 p, double radius) const {
        std::vector<int> out;
        const double r2 = radius * radius;
        for_each_candidate(p, [&](int idx) {
            if (squared_distance(pts_[static_cast<std::size_t>(idx)], p) <= r2) out.push_back(idx);
        });
        return out;
    }

    double cell() const { return cell_; }

private:
    std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
    static std::uint64_t pack(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffULL);
    }
    std::uint64_t key(Point2 p) const { return pack(coord(p.x), coord(p.y)); }

    std::span<const Point2> pts_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

// Positive-area overlap test for convex polygons (separating axes over both
// polygons' edge normals). Touching boundaries count as no overlap.
inline bool convex_overlap(std::span<const Point2> a, std::span<const Point2> b, double eps) {
    const auto separated_by_edges_of = [&](std::span<const Point2> poly, std::span<const Point2> other) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2 p = poly[i];
            const Point2 q = poly[(i + 1) % poly.size()];
            const Point2 axis{q.y - p.y, p.x - q.x};  // outward-independent normal
            double lo_a = std::numeric_limits<double>::infinity(), hi_a = -lo_a;
            for (const Point2& v : poly) {
                const double s = dot(axis, v);
                lo_a = std::min(lo_a, s);
                hi_a = std::max(hi_a, s);
            }
            double lo_b = std::numeric_limits<double>::infinity(), hi_b = -lo_b;
            for (const Point2& v : other) {
                const double s = dot(axis, v);
                lo_b = std::min(lo_b, s);
                hi_b = std::max(hi_b, s);
            }
            const double scale = norm(axis);
            if (hi_a <= lo_b + eps * scale || hi_b <= lo_a + eps * scale) return true;
        }
        return false;
    };
    if (separated_by_edges_of(a, b)) return false;
    if (separated_by_edges_of(b, a)) return false;
    return true;
}

}  // namespace detail

/// Vertices of the flat-top hexagon cell with circumradius `edge`.
inline std::array<Point2, 6> hexagon_cell(Point2 center, double edge) {
    std::array<Point2, 6> v{};
    for (int k = 0; k < 6; ++k) {
        const double a = k * (kPi / 3.0);
        v[static_cast<std::size_t>(k)] = {center.x + edge * std::cos(a), center.y + edge * std::sin(a)};
    }
    return v;
}

// Centers of the hexagonal tiling with edge length r laid over D: staggered
// columns with horizontal pitch 1.5 r and vertical pitch sqrt(3) r, alternate
// columns offset by sqrt(3) r / 2. The lattice is anchored at the bounding
// box's lower-left corner; a center is kept when its hexagon cell overlaps D
// with positive area, so the kept cells (and their radius-r circumcircles)
// cover D.
inline std::vector<Point2> hexagonal_tiling(const Environment& env, double edge) {
    if (!(edge > 0.0)) throw std::invalid_argument("hexagonal_tiling: edge must be positive");
    const Aabb& bb = env.bounding_box();
    const double px = 1.5 * edge;
    const double py = kSqrt3 * edge;
    const auto i_lo = static_cast<std::int64_t>(std::floor((-edge - 1e-9 * edge) / px)) - 1;
    const auto i_hi = static_cast<std::int64_t>(std::ceil((bb.width() + edge) / px)) + 1;
    std::vector<Point2> centers;
    const double eps = 1e-12;
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
        const double x = bb.min.x + px * static_cast<double>(i);
        const bool odd = ((i % 2) + 2) % 2 == 1;
        const double y0 = bb.min.y + (odd ? 0.5 * py : 0.0);
        const auto j_lo = static_cast<std::int64_t>(std::floor((bb.min.y - edge - y0) / py)) - 1;
        const auto j_hi = static_cast<std::int64_t>(std::ceil((bb.max.y + edge - y0) / py)) + 1;
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            const Point2 c{x, y0 + py * static_cast<double>(j)};
            const auto cell = hexagon_cell(c, edge);
            if (detail::convex_overlap(std::span<const Point2>(cell), std::span<const Point2>(env.vertices()), eps)) {
                centers.push_back(c);
            }
        }
    }
    return centers;
}

struct Cover {
    std::vector<Point2> centers;
    double radius = 0.0;
};

/// Grid relaxation of the r-covering predicate: every grid point of D lies
/// within `cover.radius` of some center.
inline bool is_covering(const Cover& cover, const Environment& env, double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("is_covering: grid_step must be positive");
    if (!(cover.radius > 0.0)) throw std::invalid_argument("is_covering: radius must be positive");
    const std::vector<Point2> grid = environment_grid(env, grid_step);
    if (cover.centers.empty()) return grid.empty();
    const double r = cover.radius * (1.0 + 1e-12);
    const detail::SpatialHash hash(cover.centers, cover.radius);
    const double r2 = r * r;
    for (const Point2& p : grid) {
        bool covered = false;
        hash.for_each_candidate(p, [&](int idx) {
            if (!covered && squared_distance(cover.centers[static_cast<std::size_t>(idx)], p) <= r2) covered = true;
        });
        if (covered) continue;
        // fall back to a full scan: the hash only sees a 3x3 neighbourhood
        for (const Point2& c : cover.centers) {
            if (squared_distance(c, p) <= r2) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

/// Strict r-packing predicate: all pairwise distances exceed r.
inline bool is_packing(std::span<const Point2> points, double r) {
    const double r2 = r * r;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (squared_distance(points[i], points[j]) <= r2) return false;
        }
    }
    return true;
}

/// Greedy maximal r-packing subset, scanned in input order.
inline std::vector<Point2> maximal_packing(std::span<const Point2> points, double r) {
    std::vector<Point2> kept;
    const double r2 = r * r;
    for (const Point2& p : points) {
        bool ok = true;
        for (const Point2& q : kept) {
            if (squared_distance(p, q) <= r2) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(p);
    }
    return kept;
}

}  // namespace fieldcover
