#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fieldcover/errors.hpp"
#include "fieldcover/field_model.hpp"

using namespace fieldcover;
using Catch::Approx;

namespace {

const FieldParams kUnit(1.0, 1.0, 1.0);
// agricultural-field hyperparameters: sigma0 = 12.87, L = 8.33, sigma^2 = 0.0361
const FieldParams kField(12.87 * 12.87, 8.33, 0.0361);

}  // namespace

TEST_CASE("field params validation") {
    CHECK_THROWS_AS(FieldParams(0.0, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(1.0, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(1.0, 1.0, -0.1), std::invalid_argument);
    CHECK_NOTHROW(FieldParams(1.0, 1.0, 0.0));
}

TEST_CASE("covariance values") {
    CHECK(covariance(0.0, kUnit) == Approx(1.0));
    CHECK(covariance(0.0, kField) == Approx(kField.sigma0_sq));
    // at the effective range the kernel sits at the ~5% level (exactly e^-3)
    const double r_max = compute_r_max(kUnit);
    CHECK(covariance(r_max, kUnit) == Approx(std::exp(-3.0)).epsilon(1e-13));
    CHECK(std::abs(covariance(r_max, kUnit) - 0.05) < 5e-4);
    CHECK(covariance(1.0, FieldParams(1.0, 1.0, 0.0)) == Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(covariance(-1.0, kUnit), std::domain_error);
}

TEST_CASE("truncated covariance vanishes beyond the effective range") {
    const double r_max = compute_r_max(kUnit);
    CHECK(covariance(r_max, kUnit, true) == Approx(std::exp(-3.0)));
    CHECK(covariance(r_max + 1e-9, kUnit, true) == 0.0);
    CHECK(covariance(100.0, kUnit, true) == 0.0);
    CHECK(covariance(100.0, kUnit, false) > 0.0);
}

TEST_CASE("effective range") {
    CHECK(compute_r_max(FieldParams(1.0, 1.0, 0.0)) == Approx(std::sqrt(6.0)).epsilon(1e-14));
    CHECK(compute_r_max(kField) == Approx(std::sqrt(6.0) * 8.33).epsilon(1e-14));
}

TEST_CASE("noise floor") {
    CHECK(noise_floor(FieldParams(1.0, 1.0, 0.0)) == 0.0);
    CHECK(noise_floor(kUnit) == Approx(0.5));
    CHECK(noise_floor(kField) == Approx(165.6369 * 0.0361 / (165.6369 + 0.0361)).epsilon(1e-12));
}

TEST_CASE("r_min from the tolerance") {
    // field setup at Delta = 0.3 sigma0^2
    const double r = compute_r_min(kField, 0.3 * kField.sigma0_sq);
    CHECK(r == Approx(4.9733).margin(5e-4));

    // approaching the noise floor from above drives r_min to zero
    const double floor = noise_floor(kUnit);
    CHECK(compute_r_min(kUnit, floor * 1.0000001) < 1e-3);

    // at the boundary the log argument is exactly 1 -> rejected
    CHECK_THROWS_AS(compute_r_min(kUnit, 0.5), InfeasibleToleranceError);
    CHECK_THROWS_AS(compute_r_min(kUnit, 0.4), InfeasibleToleranceError);
    CHECK_THROWS_AS(compute_r_min(kUnit, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_r_min(kUnit, 1.0), std::invalid_argument);
}

TEST_CASE("planning query invariants") {
    const PlanningQuery q = make_planning_query(kField, 0.2 * kField.sigma0_sq);
    CHECK(q.r_max == Approx(std::sqrt(6.0) * 8.33));
    CHECK(q.r_min > 0.0);
    CHECK(q.delta == Approx(0.2 * kField.sigma0_sq));
}

TEST_CASE("estimation error basics") {
    CHECK(estimation_error({0, 0}, std::vector<Point2>{}, kUnit) == Approx(1.0));

    // single sample at r_min brings the error exactly to delta
    for (double delta : {0.6, 0.75, 0.9}) {
        const double r = compute_r_min(kUnit, delta);
        const std::vector<Point2> s{{r, 0.0}};
        CHECK(estimation_error({0, 0}, s, kUnit) == Approx(delta).epsilon(1e-12));
        CHECK(single_sample_error(r, kUnit) == Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("published counterexample value") {
    const double r = 0.93255461;
    const std::vector<Point2> s{{r, 0}, {-r, 0}, {0, r}, {0, -r}};
    const double f = estimation_error({0, 0}, s, kUnit, false);
    CHECK(f == Approx(0.443771).margin(1e-5));
    CHECK(f < 0.5);
}

TEST_CASE("estimation error is within range and empty beyond truncation") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> s;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) s.push_back({coord(rng), coord(rng)});
        const Point2 x{coord(rng), coord(rng)};
        const double f = estimation_error(x, s, kUnit);
        CHECK(f >= -1e-9);
        CHECK(f <= kUnit.sigma0_sq + 1e-9);
    }
    // all samples beyond r_max in truncated mode leave the prior variance
    const double far = compute_r_max(kUnit) + 0.5;
    const std::vector<Point2> s{{far, 0.0}, {0.0, -far}};
    CHECK(estimation_error({0, 0}, s, kUnit, true) == Approx(kUnit.sigma0_sq));
    CHECK(estimation_error({0, 0}, s, kUnit, false) < kUnit.sigma0_sq);
}

TEST_CASE("monotonicity: adding a sample never increases the error") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point2> s;
        const int n = static_cast<int>(rng() % 7);
        for (int i = 0; i < n; ++i) s.push_back({coord(rng), coord(rng)});
        const Point2 x{coord(rng), coord(rng)};
        const Point2 extra{coord(rng), coord(rng)};
        const double before = estimation_error(x, s, kUnit);
        s.push_back(extra);
        const double after = estimation_error(x, s, kUnit);
        CHECK(after <= before + 1e-9);
    }
}

TEST_CASE("truncated and exact agree when every distance is inside the range") {
    std::mt19937_64 rng(17);
    // cluster well inside r_max = sqrt(6)
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Point2> s;
        for (int i = 0; i < 4; ++i) s.push_back({coord(rng), coord(rng)});
        const Point2 x{coord(rng), coord(rng)};
        const double exact = estimation_error(x, s, kUnit, false);
        const double truncated = estimation_error(x, s, kUnit, true);
        CHECK(truncated == Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("noiseless duplicate samples are a singular system") {
    const FieldParams noiseless(1.0, 1.0, 0.0);
    const std::vector<Point2> dup{{0.5, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_AS(estimation_error({0, 0}, dup, noiseless), SingularSystemError);
    // with noise the same configuration is fine
    CHECK_NOTHROW(estimation_error({0, 0}, dup, kUnit));
}

TEST_CASE("kriging system entries stay in the kernel range") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::vector<Point2> s;
    for (int i = 0; i < 6; ++i) s.push_back({coord(rng), coord(rng)});
    const KrigingSystem sys = assemble_kriging_system({0, 0}, s, kField);
    for (int i = 0; i < sys.cross_cov.size(); ++i) {
        CHECK(sys.cross_cov(i) >= 0.0);
        CHECK(sys.cross_cov(i) <= kField.sigma0_sq);
    }
    for (int i = 0; i < sys.gram.rows(); ++i) {
        CHECK(sys.gram(i, i) == Approx(kField.sigma0_sq + kField.noise_var));
        for (int j = 0; j < sys.gram.cols(); ++j) {
            CHECK(sys.gram(i, j) == Approx(sys.gram(j, i)));
            if (i != j) {
                CHECK(sys.gram(i, j) >= 0.0);
                CHECK(sys.gram(i, j) <= kField.sigma0_sq);
            }
        }
    }
}
