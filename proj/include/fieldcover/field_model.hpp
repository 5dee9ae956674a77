#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fieldcover/errors.hpp"
#include "fieldcover/geometry.hpp"

namespace fieldcover {

// Squared-exponential field hyperparameters and measurement noise.
// sigma0_sq and noise_var are in field-units^2, length_scale in meters.
struct FieldParams {
    double sigma0_sq;
    double length_scale;
    double noise_var;

    FieldParams(double sigma0_sq_, double length_scale_, double noise_var_)
        : sigma0_sq(sigma0_sq_), length_scale(length_scale_), noise_var(noise_var_) {
        if (!(sigma0_sq > 0.0)) throw std::invalid_argument("FieldParams: sigma0_sq must be positive");
        if (!(length_scale > 0.0)) throw std::invalid_argument("FieldParams: length_scale must be positive");
        if (!(noise_var >= 0.0)) throw std::invalid_argument("FieldParams: noise_var must be nonnegative");
    }
};

/// Effective range: phi drops to the 5% level at sqrt(6) L.
inline double compute_r_max(const FieldParams& params) { return std::sqrt(6.0) * params.length_scale; }

/// Smallest error a single collocated noisy sample can achieve.
inline double noise_floor(const FieldParams& params) {
    return params.sigma0_sq * params.noise_var / (params.sigma0_sq + params.noise_var);
}

/// phi(r) = sigma0^2 exp(-r^2 / (2 L^2)); zero beyond r_max in truncated mode.
inline double covariance(double r, const FieldParams& params, bool truncated = false) {
    if (r < 0.0) throw std::domain_error("covariance: distance must be nonnegative");
    if (truncated && r > compute_r_max(params)) return 0.0;
    const double z = r / params.length_scale;
    return params.sigma0_sq * std::exp(-0.5 * z * z);
}

// Radius of accurate estimation: a single sample within r_min keeps the
// estimation error at or below delta. Inverts the n=1 closed form, i.e.
// r_min = L sqrt(-log((sigma0^2 - delta)(sigma0^2 + sigma^2)/sigma0^4)).
inline double compute_r_min(const FieldParams& params, double delta) {
    if (!(delta > 0.0) || !(delta < params.sigma0_sq)) {
        throw std::invalid_argument("compute_r_min: delta must lie in (0, sigma0_sq)");
    }
    const double arg =
        (params.sigma0_sq - delta) * (params.sigma0_sq + params.noise_var) / (params.sigma0_sq * params.sigma0_sq);
    if (arg >= 1.0) {
        std::ostringstream msg;
        msg << "tolerance " << delta << " is not achievable: it does not exceed the noise floor "
            << noise_floor(params) << " (= sigma0^2 sigma^2 / (sigma0^2 + sigma^2))";
        throw InfeasibleToleranceError(msg.str());
    }
    return params.length_scale * std::sqrt(-std::log(arg));
}

// Error tolerance plus its derived radii.
struct PlanningQuery {
    double delta;
    double r_min;
    double r_max;
};

inline PlanningQuery make_planning_query(const FieldParams& params, double delta) {
    return PlanningQuery{delta, compute_r_min(params, delta), compute_r_max(params)};
}

/// n=1 estimation error at sample distance d (closed form).
inline double single_sample_error(double d, const FieldParams& params, bool truncated = false) {
    const double c = covariance(d, params, truncated);
    return params.sigma0_sq - c * c / (params.sigma0_sq + params.noise_var);
}

// Cross covariances b_{x,S} and Gram matrix C_S = K(S,S) + sigma^2 I.
struct KrigingSystem {
    Eigen::VectorXd cross_cov;
    Eigen::MatrixXd gram;
};

inline KrigingSystem assemble_kriging_system(Point2 x, std::span<const Point2> samples, const FieldParams& params,
                                             bool truncated = false) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    KrigingSystem sys;
    sys.cross_cov.resize(n);
    sys.gram.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point2 si = samples[static_cast<std::size_t>(i)];
        sys.cross_cov(i) = covariance(distance(x, si), params, truncated);
        sys.gram(i, i) = params.sigma0_sq + params.noise_var;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = covariance(distance(si, samples[static_cast<std::size_t>(j)]), params, truncated);
            sys.gram(i, j) = v;
            sys.gram(j, i) = v;
        }
    }
    return sys;
}

// Kriging estimation error f_x(S) = phi(0) - b' C^-1 b, solved through a
// Cholesky factorization. Empty S returns the prior variance. In truncated
// mode only samples within r_max of x enter the system; the excluded ones
// have zero cross covariance there, so the value is unchanged.
inline double estimation_error(Point2 x, std::span<const Point2> samples, const FieldParams& params,
                               bool truncated = false) {
    std::vector<Point2> local;
    if (truncated) {
        const double r_max = compute_r_max(params);
        for (const Point2& s : samples) {
            if (distance(x, s) <= r_max) local.push_back(s);
        }
        samples = local;
    }
    if (samples.empty()) return params.sigma0_sq;
    const KrigingSystem sys = assemble_kriging_system(x, samples, params, truncated);
    const Eigen::LLT<Eigen::MatrixXd> llt(sys.gram);
    if (llt.info() != Eigen::Success) {
        throw SingularSystemError("estimation_error: Gram matrix is not positive definite (duplicate noiseless samples?)");
    }
    const double explained = sys.cross_cov.dot(llt.solve(sys.cross_cov));
    return params.sigma0_sq - explained;
}

}  // namespace fieldcover
