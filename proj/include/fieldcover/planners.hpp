#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldcover/field_model.hpp"
#include "fieldcover/geometry.hpp"
#include "fieldcover/tsp.hpp"
#include "fieldcover/verification.hpp"

namespace fieldcover {

enum class SampleOrigin { kTiling, kProjected, kRepair };

inline const char* to_string(SampleOrigin o) {
    switch (o) {
        case SampleOrigin::kTiling: return "tiling";
        case SampleOrigin::kProjected: return "projected";
        case SampleOrigin::kRepair: return "repair";
    }
    return "unknown";
}

inline SampleOrigin sample_origin_from_string(const std::string& s) {
    if (s == "tiling") return SampleOrigin::kTiling;
    if (s == "projected") return SampleOrigin::kProjected;
    if (s == "repair") return SampleOrigin::kRepair;
    throw std::invalid_argument("unknown sample origin tag: " + s);
}

// Finite duplicate-free sample placement inside D with per-point provenance.
struct MeasurementSet {
    std::vector<Point2> points;
    std::vector<SampleOrigin> origin_tags;
    double r_min_used = 0.0;
    bool spacing_capped = false;  // r_min exceeded r_max and was capped
};

struct PlannerOptions {
    double grid_step = 0.0;  // 0: r_min_used / 20
    ChristofidesOptions tsp{};
    bool apply_two_opt = true;
    FeasibilityMode feasibility = FeasibilityMode::kExact;
};

namespace detail {

inline void append_unique(std::vector<Point2>& pts, std::vector<SampleOrigin>& tags, Point2 p, SampleOrigin tag,
                          double tol) {
    const double tol2 = tol * tol;
    for (const Point2& q : pts) {
        if (squared_distance(p, q) <= tol2) return;
    }
    pts.push_back(p);
    tags.push_back(tag);
}

inline double effective_grid_step(const PlannerOptions& opts, double r_used) {
    return opts.grid_step > 0.0 ? opts.grid_step : r_used / 20.0;
}

}  // namespace detail

// Adds the uncovered grid points themselves as samples, in scan order, until
// the set is an r-covering of the grid. Each addition covers at least its
// own location, so the pass terminates.
inline MeasurementSet boundary_repair(const Environment& env, MeasurementSet samples, double cover_radius,
                                      double grid_step) {
    if (!(cover_radius > 0.0)) throw std::invalid_argument("boundary_repair: cover_radius must be positive");
    if (!(grid_step > 0.0)) throw std::invalid_argument("boundary_repair: grid_step must be positive");
    const std::vector<Point2> grid = environment_grid(env, grid_step);
    if (grid.empty()) return samples;
    const detail::SpatialHash grid_hash(grid, cover_radius);
    const double r2 = cover_radius * cover_radius;
    std::vector<char> covered(grid.size(), 0);
    {
        const detail::SpatialHash sample_hash(samples.points, cover_radius);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            sample_hash.for_each_candidate(grid[k], [&](int idx) {
                if (!covered[k] && squared_distance(samples.points[static_cast<std::size_t>(idx)], grid[k]) <= r2) {
                    covered[k] = 1;
                }
            });
        }
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (covered[k]) continue;
        const Point2 p = grid[k];
        samples.points.push_back(p);
        samples.origin_tags.push_back(SampleOrigin::kRepair);
        grid_hash.for_each_candidate(p, [&](int idx) {
            if (squared_distance(grid[static_cast<std::size_t>(idx)], p) <= r2) covered[static_cast<std::size_t>(idx)] = 1;
        });
    }
    return samples;
}

// HexCover: hexagonal tiling of edge r_min; centers outside D are projected
// onto D (convex projection cannot increase the distance to any point of D,
// so the r_min covering survives); duplicates from corner projections are
// merged; boundary repair then certifies the grid cover.
inline MeasurementSet hex_cover(const Environment& env, const FieldParams& params, double delta,
                                const PlannerOptions& opts = {}) {
    const PlanningQuery query = make_planning_query(params, delta);
    MeasurementSet out;
    out.spacing_capped = query.r_min > query.r_max;
    const double r_used = out.spacing_capped ? query.r_max : query.r_min;
    out.r_min_used = r_used;
    const double tol = 1e-9 * r_used;
    for (const Point2& c : hexagonal_tiling(env, r_used)) {
        if (env.contains(c)) {
            detail::append_unique(out.points, out.origin_tags, c, SampleOrigin::kTiling, tol);
        } else {
            detail::append_unique(out.points, out.origin_tags, env.project(c), SampleOrigin::kProjected, tol);
        }
    }
    return boundary_repair(env, std::move(out), r_used, detail::effective_grid_step(opts, r_used));
}

/// Radius used by the prior work's disk construction: the (disproved)
/// necessary-condition bound L sqrt(-log(1 - Delta/sigma0^2)).
inline double legacy_disk_radius(const FieldParams& params, double delta) {
    if (!(delta > 0.0) || !(delta < params.sigma0_sq)) {
        throw std::invalid_argument("legacy_disk_radius: delta must lie in (0, sigma0_sq)");
    }
    return params.length_scale * std::sqrt(-std::log(1.0 - delta / params.sigma0_sq));
}

// DiskCover baseline (faithful variant of the two-step prior construction):
// cover D with disks of the legacy radius arranged hexagonally, cover every
// disk with the classic 7-circle pattern (center plus a ring of six at
// (sqrt3/2) R, a one-ring hexagonal arrangement), drop samples outside D,
// merge coincident duplicates, and repair the boundary. The per-disk covers
// overlap rather than share a global lattice, which is what makes the
// baseline spend roughly six times as many samples as HexCover.
inline MeasurementSet disk_cover(const Environment& env, const FieldParams& params, double delta,
                                 const PlannerOptions& opts = {}) {
    const PlanningQuery query = make_planning_query(params, delta);
    MeasurementSet out;
    out.spacing_capped = query.r_min > query.r_max;
    const double r_used = out.spacing_capped ? query.r_max : query.r_min;
    out.r_min_used = r_used;
    const double disk_radius = std::min(legacy_disk_radius(params, delta), query.r_max);
    const double ring = 0.5 * kSqrt3 * disk_radius;
    const double tol = 1e-9 * disk_radius;
    for (const Point2& c : hexagonal_tiling(env, disk_radius)) {
        if (env.contains(c)) detail::append_unique(out.points, out.origin_tags, c, SampleOrigin::kTiling, tol);
        for (int k = 0; k < 6; ++k) {
            const double a = k * (kPi / 3.0);
            const Point2 p{c.x + ring * std::cos(a), c.y + ring * std::sin(a)};
            if (env.contains(p)) detail::append_unique(out.points, out.origin_tags, p, SampleOrigin::kTiling, tol);
        }
    }
    return boundary_repair(env, std::move(out), r_used, detail::effective_grid_step(opts, r_used));
}

// Full planning artifact: samples, optional tour, bound diagnostics and the
// feasibility certificate.
struct PlanReport {
    PlanningQuery query{};
    MeasurementSet samples;
    std::optional<Tour> tour;
    double raw_tour_length = 0.0;
    MatchingMode matching_used = MatchingMode::kExact;
    bool two_opt_applied = false;
    BoundsReport diagnostics;
    FeasibilityResult feasibility;
};

enum class PlannerAlgorithm { kHexCover, kDiskCover };

inline MeasurementSet plan_samples(PlannerAlgorithm algorithm, const Environment& env, const FieldParams& params,
                                   double delta, const PlannerOptions& opts = {}) {
    return algorithm == PlannerAlgorithm::kHexCover ? hex_cover(env, params, delta, opts)
                                                    : disk_cover(env, params, delta, opts);
}

inline PlanReport make_plan_report(PlannerAlgorithm algorithm, const Environment& env, const FieldParams& params,
                                   double delta, bool with_tour, const PlannerOptions& opts = {}) {
    PlanReport report;
    report.query = make_planning_query(params, delta);
    report.samples = plan_samples(algorithm, env, params, delta, opts);
    std::optional<double> raw_length;
    if (with_tour) {
        const ChristofidesResult cr = christofides(report.samples.points, opts.tsp);
        report.raw_tour_length = cr.tour.length;
        report.matching_used = cr.matching_used;
        raw_length = cr.tour.length;
        if (opts.apply_two_opt) {
            report.tour = two_opt(cr.tour, report.samples.points);
            report.two_opt_applied = true;
        } else {
            report.tour = cr.tour;
        }
    }
    const double step = detail::effective_grid_step(opts, report.samples.r_min_used);
    report.feasibility = check_feasibility(env, report.samples.points, params, delta, step, opts.feasibility);
    report.diagnostics = compute_bounds(env, report.query, report.samples.points.size(), raw_length);
    return report;
}

/// Algorithm 1 + feasibility certificate and diagnostics, no tour.
inline PlanReport hex_cover_plan(const Environment& env, const FieldParams& params, double delta,
                                 const PlannerOptions& opts = {}) {
    return make_plan_report(PlannerAlgorithm::kHexCover, env, params, delta, /*with_tour=*/false, opts);
}

/// Algorithm 2: HexCover then a Christofides tour (plus 2-opt by default).
inline PlanReport hex_cover_tour(const Environment& env, const FieldParams& params, double delta,
                                 const PlannerOptions& opts = {}) {
    return make_plan_report(PlannerAlgorithm::kHexCover, env, params, delta, /*with_tour=*/true, opts);
}

inline PlanReport disk_cover_plan(const Environment& env, const FieldParams& params, double delta,
                                  const PlannerOptions& opts = {}) {
    return make_plan_report(PlannerAlgorithm::kDiskCover, env, params, delta, /*with_tour=*/false, opts);
}

inline PlanReport disk_cover_tour(const Environment& env, const FieldParams& params, double delta,
                                  const PlannerOptions& opts = {}) {
    return make_plan_report(PlannerAlgorithm::kDiskCover, env, params, delta, /*with_tour=*/true, opts);
}

}  // namespace fieldcover
