#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fieldcover/errors.hpp"
#include "fieldcover/field_model.hpp"
#include "fieldcover/geometry.hpp"
#include "fieldcover/rng.hpp"

namespace fieldcover {

// Outcome of the gridded Problem-1 constraint check f_x(S) <= Delta.
struct FeasibilityResult {
    bool feasible = false;
    Point2 worst_point{};
    double worst_error = 0.0;
    double grid_step = 0.0;
    std::size_t points_checked = 0;
    bool exact_mode = true;   // false: covered points bounded by the n=1 closed form
    double tolerance = 0.0;
};

enum class FeasibilityMode {
    kExact,      // local kriging system at every grid point
    kCertified,  // n=1 upper bound where a sample lies within r_min, local system elsewhere
};

namespace detail {

// Local kriging evaluation with factorization reuse across grid points that
// share the same neighbourhood.
class LocalErrorEvaluator {
public:
    LocalErrorEvaluator(std::span<const Point2> samples, const FieldParams& params)
        : samples_(samples), params_(params) {}

    double evaluate(Point2 x, std::vector<int>& local) {
        std::sort(local.begin(), local.end());
        if (local.empty()) return params_.sigma0_sq;
        if (local != cached_indices_) {
            const auto k = static_cast<Eigen::Index>(local.size());
            Eigen::MatrixXd gram(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                const Point2 si = samples_[static_cast<std::size_t>(local[static_cast<std::size_t>(i)])];
                gram(i, i) = params_.sigma0_sq + params_.noise_var;
                for (Eigen::Index j = i + 1; j < k; ++j) {
                    const Point2 sj = samples_[static_cast<std::size_t>(local[static_cast<std::size_t>(j)])];
                    const double v = covariance(distance(si, sj), params_);
                    gram(i, j) = v;
                    gram(j, i) = v;
                }
            }
            llt_.compute(gram);
            if (llt_.info() != Eigen::Success) {
                throw SingularSystemError("check_feasibility: local Gram matrix is not positive definite");
            }
            cached_indices_ = local;
        }
        const auto k = static_cast<Eigen::Index>(local.size());
        Eigen::VectorXd b(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            b(i) = covariance(distance(x, samples_[static_cast<std::size_t>(local[static_cast<std::size_t>(i)])]), params_);
        }
        return params_.sigma0_sq - b.dot(llt_.solve(b));
    }

private:
    std::span<const Point2> samples_;
    const FieldParams& params_;
    std::vector<int> cached_indices_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace detail

// Evaluates the estimation error over the grid of D. Each point uses the
// samples within r_max of it plus the globally nearest sample; monotonicity
// of f makes every reported value an upper bound on the full-S error, so a
// feasible verdict certifies the continuous constraint up to grid slack.
inline FeasibilityResult check_feasibility(const Environment& env, std::span<const Point2> samples,
                                           const FieldParams& params, double delta, double grid_step,
                                           FeasibilityMode mode = FeasibilityMode::kExact) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("check_feasibility: grid_step must be positive");
    FeasibilityResult result;
    result.grid_step = grid_step;
    result.tolerance = 1e-9 * std::max(1.0, params.sigma0_sq);
    result.exact_mode = (mode == FeasibilityMode::kExact);
    const std::vector<Point2> grid = environment_grid(env, grid_step);
    result.points_checked = grid.size();
    if (grid.empty()) {
        result.feasible = true;
        return result;
    }
    if (samples.empty()) {
        result.feasible = false;
        result.worst_point = grid.front();
        result.worst_error = params.sigma0_sq;
        return result;
    }
    const double r_max = compute_r_max(params);
    double r_min = 0.0;
    if (mode == FeasibilityMode::kCertified) r_min = std::min(compute_r_min(params, delta), r_max);
    const detail::SpatialHash far_hash(samples, r_max);
    std::optional<detail::SpatialHash> near_hash;
    if (mode == FeasibilityMode::kCertified) near_hash.emplace(samples, std::max(r_min, 1e-12));
    detail::LocalErrorEvaluator evaluator(samples, params);

    double worst = -std::numeric_limits<double>::infinity();
    Point2 worst_pt = grid.front();
    std::vector<int> local;
    const double r_max2 = r_max * r_max;
    for (const Point2& p : grid) {
        double value;
        bool bounded = false;
        if (mode == FeasibilityMode::kCertified) {
            double best2 = std::numeric_limits<double>::infinity();
            near_hash->for_each_candidate(p, [&](int idx) {
                best2 = std::min(best2, squared_distance(samples[static_cast<std::size_t>(idx)], p));
            });
            if (best2 <= r_min * r_min) {
                value = single_sample_error(std::sqrt(best2), params);
                bounded = true;
            }
        }
        if (!bounded) {
            local.clear();
            far_hash.for_each_candidate(p, [&](int idx) {
                if (squared_distance(samples[static_cast<std::size_t>(idx)], p) <= r_max2) local.push_back(idx);
            });
            if (local.empty()) {
                // globally nearest sample keeps the system non-empty
                int nearest = 0;
                double best2 = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const double d2 = squared_distance(samples[i], p);
                    if (d2 < best2) {
                        best2 = d2;
                        nearest = static_cast<int>(i);
                    }
                }
                local.push_back(nearest);
            }
            value = evaluator.evaluate(p, local);
        }
        if (value > worst) {
            worst = value;
            worst_pt = p;
        }
    }
    result.worst_error = worst;
    result.worst_point = worst_pt;
    result.feasible = worst <= delta + result.tolerance;
    return result;
}

// Reproduction of the published counterexample to the prior lower-bound
// claim: four samples just beyond the claimed radius still beat Delta.
struct CounterexampleReport {
    double rhs_bound = 0.0;
    double r_used = 0.0;
    double error_value = 0.0;
    double delta = 0.0;
    bool contradiction = false;
};

inline CounterexampleReport counterexample_check() {
    const FieldParams params(1.0, 1.0, 1.0);
    const double delta = 0.5;
    CounterexampleReport report;
    report.delta = delta;
    report.rhs_bound = params.length_scale * std::sqrt(-std::log(1.0 - delta / params.sigma0_sq));
    report.r_used = 0.93255461;  // published placement radius
    const double r = report.r_used;
    const std::vector<Point2> samples{{r, 0.0}, {-r, 0.0}, {0.0, r}, {0.0, -r}};
    report.error_value = estimation_error(Point2{0.0, 0.0}, samples, params, /*truncated=*/false);
    report.contradiction = (report.r_used > report.rhs_bound) && (report.error_value < delta);
    return report;
}

// Bound diagnostics with the epsilon-free leading constants.
struct BoundsReport {
    long long sample_lower_bound = 0;   // ceil(area / (pi r_max^2))
    long long sample_upper_bound = 0;   // ceil(3 area / (pi r_min^2))
    double tour_lower_bound = 0.0;      // (2/9) area / (pi r_max)
    double tour_upper_bound = 0.0;      // 15.6 area / (pi r_min)
    double realized_sample_ratio = 0.0;
    double realized_tour_ratio = 0.0;
    double alpha_samples = 0.0;         // 3 r_max^2 / r_min^2
    double alpha_tour = 0.0;            // 70.2 r_max / r_min
};

inline BoundsReport compute_bounds(const Environment& env, const PlanningQuery& query, std::size_t n_samples,
                                   std::optional<double> raw_tour_length = std::nullopt) {
    BoundsReport report;
    const double a = area(env);
    const double r_min = query.r_min;
    const double r_max = query.r_max;
    report.sample_lower_bound = static_cast<long long>(std::ceil(a / (kPi * r_max * r_max)));
    report.sample_upper_bound = static_cast<long long>(std::ceil(3.0 * a / (kPi * r_min * r_min)));
    report.tour_lower_bound = (2.0 / 9.0) * a / (kPi * r_max);
    report.tour_upper_bound = 15.6 * a / (kPi * r_min);
    report.alpha_samples = 3.0 * (r_max * r_max) / (r_min * r_min);
    report.alpha_tour = 70.2 * r_max / r_min;
    const double lower = static_cast<double>(std::max<long long>(1, report.sample_lower_bound));
    report.realized_sample_ratio = static_cast<double>(n_samples) / lower;
    if (raw_tour_length) report.realized_tour_ratio = *raw_tour_length / report.tour_lower_bound;
    return report;
}

// Stochastic oracle for Eq-style estimation error: simulate the joint field,
// apply the linear predictor, and report the empirical mean squared error.
struct MonteCarloResult {
    double empirical_mse = 0.0;
    double standard_error = 0.0;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
};

inline MonteCarloResult monte_carlo_mse(Point2 x, std::span<const Point2> samples, const FieldParams& params,
                                        std::size_t trials, std::uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("monte_carlo_mse: need at least 1000 trials");
    if (samples.size() > 200) throw SizeLimitError("monte_carlo_mse: limited to 200 samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd joint(n + 1, n + 1);
    joint(0, 0) = params.sigma0_sq;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point2 si = samples[static_cast<std::size_t>(i)];
        const double c = covariance(distance(x, si), params);
        joint(0, i + 1) = c;
        joint(i + 1, 0) = c;
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = covariance(distance(si, samples[static_cast<std::size_t>(j)]), params);
            joint(i + 1, j + 1) = v;
            joint(j + 1, i + 1) = v;
        }
    }
    // tiny jitter keeps the noiseless joint factorization stable
    const double jitter = 1e-10 * params.sigma0_sq;
    for (Eigen::Index i = 0; i <= n; ++i) joint(i, i) += jitter;
    const Eigen::LLT<Eigen::MatrixXd> joint_llt(joint);
    if (joint_llt.info() != Eigen::Success) {
        throw SingularSystemError("monte_carlo_mse: joint covariance is not positive definite");
    }
    const Eigen::MatrixXd chol = joint_llt.matrixL();

    Eigen::VectorXd weights(n);
    if (n > 0) {
        Eigen::MatrixXd gram = joint.bottomRightCorner(n, n);
        for (Eigen::Index i = 0; i < n; ++i) gram(i, i) += params.noise_var - jitter;
        const Eigen::LLT<Eigen::MatrixXd> gram_llt(gram);
        if (gram_llt.info() != Eigen::Success) {
            throw SingularSystemError("monte_carlo_mse: Gram matrix is not positive definite");
        }
        weights = gram_llt.solve(joint.col(0).tail(n));
    }

    CounterRng rng(seed);
    const double noise_sd = std::sqrt(params.noise_var);
    Eigen::VectorXd gauss(n + 1);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (Eigen::Index i = 0; i <= n; ++i) gauss(i) = rng.normal();
        const Eigen::VectorXd z = chol * gauss;
        double prediction = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) prediction += weights(i) * (z(i + 1) + noise_sd * rng.normal());
        const double err = z(0) - prediction;
        const double sq = err * err;
        const double delta_mean = sq - mean;
        mean += delta_mean / static_cast<double>(t + 1);
        m2 += delta_mean * (sq - mean);
    }
    MonteCarloResult result;
    result.empirical_mse = mean;
    result.standard_error = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
    result.seed = seed;
    result.trials = trials;
    return result;
}

}  // namespace fieldcover
