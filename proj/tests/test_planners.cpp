#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "fieldcover/planners.hpp"

using namespace fieldcover;
using Catch::Approx;

namespace {

const FieldParams kField(12.87 * 12.87, 8.33, 0.0361);

bool all_inside(const Environment& env, const MeasurementSet& ms) {
    for (const Point2& p : ms.points) {
        if (!env.contains(p)) return false;
    }
    return true;
}

bool duplicate_free(const MeasurementSet& ms, double tol) {
    for (std::size_t i = 0; i < ms.points.size(); ++i) {
        for (std::size_t j = i + 1; j < ms.points.size(); ++j) {
            if (distance(ms.points[i], ms.points[j]) <= tol) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("hex cover on a region inside one cell uses a single sample") {
    const double delta = 0.3 * kField.sigma0_sq;
    const double r = compute_r_min(kField, delta);
    const Environment tiny = Environment::rectangle(r / 2, r / 2);
    const MeasurementSet ms = hex_cover(tiny, kField, delta);
    CHECK(ms.points.size() == 1);
    CHECK(ms.r_min_used == Approx(r));
    CHECK_FALSE(ms.spacing_capped);
    CHECK(all_inside(tiny, ms));
    // the lattice anchor sits on the bbox corner, inside D
    CHECK(ms.origin_tags[0] == SampleOrigin::kTiling);
}

TEST_CASE("hex cover satisfies the count bound and contains only in-D points") {
    const double delta = 0.3 * kField.sigma0_sq;
    const double r = compute_r_min(kField, delta);
    const Environment env = Environment::rectangle(100, 100);
    const MeasurementSet ms = hex_cover(env, kField, delta);
    CHECK(static_cast<double>(ms.points.size()) <= (3.0 + 0.05) * 10000.0 / (kPi * r * r));
    CHECK(all_inside(env, ms));
    CHECK(duplicate_free(ms, 1e-10 * r));
    CHECK(is_covering(Cover{ms.points, r}, env, r / 10.0));
}

TEST_CASE("hex cover propagates infeasible tolerances") {
    CHECK_THROWS_AS(hex_cover(Environment::rectangle(10, 10), FieldParams(1.0, 1.0, 1.0), 0.3),
                    InfeasibleToleranceError);
}

TEST_CASE("hex cover projects out-of-region tile centers onto the boundary") {
    const double delta = 0.3 * kField.sigma0_sq;
    const Environment env = Environment::rectangle(40, 40);
    const MeasurementSet ms = hex_cover(env, kField, delta);
    bool has_projected = false;
    for (std::size_t i = 0; i < ms.points.size(); ++i) {
        if (ms.origin_tags[i] == SampleOrigin::kProjected) {
            has_projected = true;
            const Point2 p = ms.points[i];
            const bool on_boundary = p.x == Approx(0.0).margin(1e-9) || p.x == Approx(40.0).margin(1e-9) ||
                                     p.y == Approx(0.0).margin(1e-9) || p.y == Approx(40.0).margin(1e-9);
            CHECK(on_boundary);
        }
    }
    CHECK(has_projected);
}

TEST_CASE("very loose tolerances cap the spacing radius at r_max") {
    const FieldParams params(1.0, 1.0, 0.0001);
    const double delta = 0.999 * params.sigma0_sq;  // r_min would exceed sqrt(6) L
    CHECK(compute_r_min(params, delta) > compute_r_max(params));
    const Environment env = Environment::rectangle(20, 20);
    const MeasurementSet ms = hex_cover(env, params, delta);
    CHECK(ms.spacing_capped);
    CHECK(ms.r_min_used == Approx(compute_r_max(params)));
    CHECK(is_covering(Cover{ms.points, ms.r_min_used}, env, ms.r_min_used / 10.0));
}

TEST_CASE("boundary repair adds exactly the uncovered grid point") {
    const Environment env = Environment::rectangle(10, 10);
    const double r = 3.0;
    // covering except the upper-right corner neighbourhood
    MeasurementSet ms;
    for (double x : {1.5, 4.5, 7.5}) {
        for (double y : {1.5, 4.5, 7.5}) {
            if (x > 7 && y > 7) continue;
            ms.points.push_back({x, y});
            ms.origin_tags.push_back(SampleOrigin::kTiling);
        }
    }
    ms.r_min_used = r;
    const std::size_t before = ms.points.size();
    const MeasurementSet repaired = boundary_repair(env, ms, r, 0.5);
    CHECK(repaired.points.size() >= before + 1);
    CHECK(is_covering(Cover{repaired.points, r}, env, 0.5));
    for (std::size_t i = before; i < repaired.points.size(); ++i) {
        CHECK(repaired.origin_tags[i] == SampleOrigin::kRepair);
    }
    // an already-covering set is untouched
    const MeasurementSet again = boundary_repair(env, repaired, r, 0.5);
    CHECK(again.points.size() == repaired.points.size());
}

TEST_CASE("disk cover places more samples than hex cover but only inside D") {
    const double delta = 0.3 * kField.sigma0_sq;
    const Environment env = Environment::rectangle(100, 100);
    const MeasurementSet hex = hex_cover(env, kField, delta);
    const MeasurementSet disk = disk_cover(env, kField, delta);
    CHECK(disk.points.size() > hex.points.size());
    CHECK(all_inside(env, disk));
    CHECK(duplicate_free(disk, 1e-10));
    CHECK(is_covering(Cover{disk.points, disk.r_min_used}, env, disk.r_min_used / 10.0));
}

TEST_CASE("disk and hex counts are comparable on a tiny environment") {
    const double delta = 0.3 * kField.sigma0_sq;
    const double r = compute_r_min(kField, delta);
    const Environment tiny = Environment::rectangle(r / 2, r / 2);
    const MeasurementSet hex = hex_cover(tiny, kField, delta);
    const MeasurementSet disk = disk_cover(tiny, kField, delta);
    CHECK(hex.points.size() == 1);
    CHECK(disk.points.size() <= hex.points.size() + 3);
}

TEST_CASE("legacy disk radius matches the disproved bound") {
    CHECK(legacy_disk_radius(FieldParams(1.0, 1.0, 1.0), 0.5) == Approx(0.8325546111576977).epsilon(1e-12));
    CHECK(legacy_disk_radius(kField, 0.3 * kField.sigma0_sq) == Approx(8.33 * std::sqrt(-std::log(0.7))).epsilon(1e-12));
}

TEST_CASE("decreasing the tolerance never shrinks the hex cover") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> side(25.0, 60.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Environment env = Environment::rectangle(side(rng), side(rng));
        std::size_t prev = 0;
        for (double frac : {0.3, 0.2, 0.1}) {
            const MeasurementSet ms = hex_cover(env, kField, frac * kField.sigma0_sq);
            CHECK(ms.points.size() >= prev);
            prev = ms.points.size();
        }
    }
}

TEST_CASE("hex cover tour report wires everything together") {
    const double delta = 0.3 * kField.sigma0_sq;
    const Environment env = Environment::rectangle(60, 45);
    const PlanReport report = hex_cover_tour(env, kField, delta);
    REQUIRE(report.tour.has_value());
    // tour visits exactly the sample set
    std::set<int> visited(report.tour->order.begin(), report.tour->order.end());
    CHECK(visited.size() == report.samples.points.size());
    CHECK(report.tour->length <= report.raw_tour_length + 1e-9);
    CHECK(report.two_opt_applied);
    CHECK(report.feasibility.feasible);
    CHECK(report.feasibility.exact_mode);
    CHECK(report.diagnostics.sample_lower_bound >= 1);
    CHECK(report.diagnostics.realized_tour_ratio > 0.0);
    CHECK(report.raw_tour_length <=
          report.diagnostics.tour_upper_bound +
              2.0 * kSqrt3 * report.samples.r_min_used *
                  static_cast<double>(std::count(report.samples.origin_tags.begin(), report.samples.origin_tags.end(),
                                                 SampleOrigin::kRepair)));
}

TEST_CASE("single sample environment yields a zero length tour") {
    const double delta = 0.3 * kField.sigma0_sq;
    const double r = compute_r_min(kField, delta);
    const Environment tiny = Environment::rectangle(r / 2, r / 2);
    const PlanReport report = hex_cover_tour(tiny, kField, delta);
    REQUIRE(report.tour.has_value());
    CHECK(report.tour->length == 0.0);
    CHECK(report.samples.points.size() == 1);
}

TEST_CASE("disk cover tour flags the matching mode above the threshold") {
    const double delta = 0.2 * kField.sigma0_sq;
    const Environment env = Environment::rectangle(70, 70);
    PlannerOptions opts;
    opts.tsp.greedy_fallback_threshold = 4;  // force the fallback
    const PlanReport report = disk_cover_tour(env, kField, delta, opts);
    CHECK(report.matching_used == MatchingMode::kGreedy);
    CHECK(report.feasibility.feasible);
}
