#include "molphase/fitting.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

#include "molphase/floquet.hpp"
#include "molphase/steadystate.hpp"

namespace molphase::fitting {

namespace {

double wrap_angle(double x) { return std::remainder(x, 2.0 * kPi); }

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GaussNewtonResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd normal_matrix;  // J^T J at the optimum (weighted residual space)
    double residual_norm = 0.0;
    int iterations = 0;
};

Eigen::MatrixXd central_difference_jacobian(const ResidualFn& residuals,
                                            const Eigen::VectorXd& p, Eigen::Index m) {
    Eigen::MatrixXd jac(m, p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        const double h = std::max(1e-7, 1e-6 * std::abs(p[j]));
        Eigen::VectorXd lo = p, hi = p;
        lo[j] -= h;
        hi[j] += h;
        jac.col(j) = (residuals(hi) - residuals(lo)) / (2.0 * h);
    }
    return jac;
}

// Damped Gauss-Newton: accept only cost-decreasing steps, shrinking the
// damping by 0.3 on success and growing it by 3 on failure.
GaussNewtonResult gauss_newton(const ResidualFn& residuals, Eigen::VectorXd p,
                               int max_iterations) {
    const auto safe_cost = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) -> double {
        try {
            r = residuals(q);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
        if (!r.allFinite()) return std::numeric_limits<double>::infinity();
        return r.squaredNorm();
    };

    Eigen::VectorXd r;
    double cost = safe_cost(p, r);
    if (!std::isfinite(cost)) throw NoConvergence("residuals undefined at the starting point");

    double lambda = 1e-3;
    int iteration = 0;
    Eigen::MatrixXd normal;
    for (; iteration < max_iterations; ++iteration) {
        const Eigen::MatrixXd jac = central_difference_jacobian(residuals, p, r.size());
        normal = jac.transpose() * jac;
        const Eigen::VectorXd gradient = jac.transpose() * r;

        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::MatrixXd damped = normal;
            for (Eigen::Index i = 0; i < damped.rows(); ++i)
                damped(i, i) += lambda * std::max(normal(i, i), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
            Eigen::VectorXd r_trial;
            const double trial_cost = safe_cost(p + step, r_trial);
            if (trial_cost <= cost) {
                const double relative_drop = (cost - trial_cost) / std::max(cost, 1e-300);
                double step_scale = 0.0;
                for (Eigen::Index i = 0; i < step.size(); ++i)
                    step_scale = std::max(step_scale,
                                          std::abs(step[i]) / (std::abs(p[i]) + 1e-12));
                p += step;
                r = r_trial;
                cost = trial_cost;
                lambda = std::max(lambda * 0.3, 1e-14);
                accepted = true;
                if (relative_drop < 1e-14 || step_scale < 1e-12) {
                    return {p, normal, std::sqrt(cost), iteration + 1};
                }
                break;
            }
            lambda *= 3.0;
        }
        if (!accepted) {
            // Damping saturated: the current point is the (local) optimum.
            return {p, normal, std::sqrt(cost), iteration + 1};
        }
    }
    throw NoConvergence("maximum Gauss-Newton iterations reached");
}

}  // namespace

TwoBeamCurves model_two_beam(const SpectrumParams& params, std::span<const double> grid_mhz,
                             const TwoBeamModelConfig& config) {
    if (grid_mhz.empty()) throw EmptyGrid();
    if (!(params.gamma_mhz > 0.0)) throw OutOfRange("gamma", "must be > 0");
    if (!(params.eta >= 0.0 && params.eta <= 1.0)) throw OutOfRange("eta", "must lie in [0, 1]");
    if (!(config.saturation >= 0.0)) throw OutOfRange("saturation", "must be >= 0");

    TwoBeamCurves curves;
    curves.extinction.reserve(grid_mhz.size());
    curves.phase_rad.reserve(grid_mhz.size());

    const double half_split = 0.5 * config.delta_split_mhz / params.gamma_mhz;
    const bool strong = config.saturation > config.floquet_threshold;
    EmitterParams emitter;
    emitter.gamma_mhz = params.gamma_mhz;
    emitter.eta = params.eta;
    emitter.psi_rad = params.psi_rad;

    for (double x : grid_mhz) {
        const double center = (x - params.center_mhz) / params.gamma_mhz;
        const double d1 = center - half_split;
        const double d2 = center + half_split;
        if (strong) {
            floquet::BichromaticDrive drive;
            drive.rabi1_gamma = std::sqrt(config.saturation / 2.0);
            drive.rabi2_gamma = drive.rabi1_gamma;
            drive.delta_split_gamma = 2.0 * half_split;
            drive.detuning1_gamma = d1;
            const auto harmonics = floquet::solve_adaptive(emitter, drive);
            const auto detector = floquet::detector_harmonics(harmonics, emitter);
            curves.extinction.push_back(params.baseline + detector.observed_extinction);
            curves.phase_rad.push_back(detector.beat_phase_rad);
        } else {
            const auto t1 = steadystate::transmission_normalized(params.eta, params.psi_rad, d1,
                                                                 config.saturation);
            const auto t2 = steadystate::transmission_normalized(params.eta, params.psi_rad, d2,
                                                                 config.saturation);
            curves.extinction.push_back(params.baseline + 1.0 -
                                        0.5 * (std::norm(t1) + std::norm(t2)));
            curves.phase_rad.push_back(std::arg(t1 * std::conj(t2)));
        }
    }
    return curves;
}

FitResult fit(const SpectrumData& data, const SpectrumParams& guess,
              const TwoBeamModelConfig& config, int max_iterations) {
    const std::size_t n_points = data.grid_mhz.size();
    if (n_points == 0 || data.extinction.size() != n_points || data.phase_rad.size() != n_points)
        throw EmptyGrid("data channels must share the grid");
    if (2 * n_points < 5 * static_cast<std::size_t>(kSpectrumParamCount))
        throw OutOfRange("data", "need at least five data points per parameter");
    if (!(data.sigma_extinction > 0.0) || !(data.sigma_phase_rad > 0.0))
        throw OutOfRange("sigma", "channel noise must be > 0");

    const double w_ext = 1.0 / data.sigma_extinction;
    const double w_phase = 1.0 / data.sigma_phase_rad;

    const ResidualFn residuals = [&](const Eigen::VectorXd& p) {
        SpectrumParams trial{p[0], p[1], p[2], p[3], p[4]};
        const auto curves = model_two_beam(trial, data.grid_mhz, config);
        Eigen::VectorXd r(2 * static_cast<Eigen::Index>(n_points));
        for (std::size_t i = 0; i < n_points; ++i) {
            r[static_cast<Eigen::Index>(i)] =
                (curves.extinction[i] - data.extinction[i]) * w_ext;
            r[static_cast<Eigen::Index>(n_points + i)] =
                wrap_angle(curves.phase_rad[i] - data.phase_rad[i]) * w_phase;
        }
        return r;
    };

    Eigen::VectorXd p0(kSpectrumParamCount);
    p0 << guess.gamma_mhz, guess.center_mhz, guess.eta, guess.psi_rad, guess.baseline;
    const auto gn = gauss_newton(residuals, p0, max_iterations);

    FitResult result;
    result.params = {gn.params[0], gn.params[1], gn.params[2], gn.params[3], gn.params[4]};
    result.residual_norm = gn.residual_norm;
    result.iterations = gn.iterations;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(gn.normal_matrix);
    if (!lu.isInvertible()) throw SingularCovariance("normal matrix is singular at the optimum");
    const Eigen::MatrixXd covariance = lu.inverse();
    result.covariance.assign(covariance.data(),
                             covariance.data() + covariance.size());
    for (int i = 0; i < kSpectrumParamCount; ++i) {
        const double var = covariance(i, i);
        if (!(var > 0.0)) throw SingularCovariance("non-positive variance at the optimum");
        result.sigma[static_cast<std::size_t>(i)] = std::sqrt(var);
    }
    return result;
}

PowerSeriesFit fit_power_series(const PowerSeriesData& data, double eta_guess,
                                double reference_saturation_guess, int max_iterations) {
    const std::size_t n = data.relative_power.size();
    if (n < 4) throw OutOfRange("data", "need at least four power points");
    if (data.extinction.size() != n) throw EmptyGrid("extinction channel must match the powers");
    const bool with_phase = !data.max_phase_rad.empty();
    if (with_phase && data.max_phase_rad.size() != n)
        throw EmptyGrid("phase channel must match the powers");
    const double decades = std::log10(data.relative_power.back() / data.relative_power.front());
    if (!(decades >= 2.0)) throw OutOfRange("data", "powers must span at least two decades");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(data.extinction[i] > 0.0)) throw OutOfRange("extinction", "must be > 0");
        if (with_phase && !(data.max_phase_rad[i] > 0.0))
            throw OutOfRange("max_phase", "must be > 0");
    }

    // Log residuals: both channels decay over decades, so relative errors are
    // the natural weighting.
    const double w_ext = 1.0 / data.sigma_extinction_rel;
    const double w_phase = 1.0 / data.sigma_phase_rel;
    const ResidualFn residuals = [&](const Eigen::VectorXd& p) {
        const double eta = p[0];
        const double s_ref = p[1];
        if (!(eta > 0.0 && eta <= 1.0)) throw OutOfRange("eta", "must lie in (0, 1]");
        if (!(s_ref > 0.0)) throw OutOfRange("reference_saturation", "must be > 0");
        Eigen::VectorXd r(static_cast<Eigen::Index>(with_phase ? 2 * n : n));
        for (std::size_t i = 0; i < n; ++i) {
            const double s = s_ref * data.relative_power[i];
            const double t0 = 1.0 - eta / (1.0 + s);
            const double ext = 1.0 - t0 * t0;
            r[static_cast<Eigen::Index>(i)] = std::log(ext / data.extinction[i]) * w_ext;
            if (with_phase) {
                const double phase = steadystate::max_abs_phase(eta, 0.0, s);
                r[static_cast<Eigen::Index>(n + i)] =
                    std::log(phase / data.max_phase_rad[i]) * w_phase;
            }
        }
        return r;
    };

    Eigen::VectorXd p0(2);
    p0 << eta_guess, reference_saturation_guess;
    const auto gn = gauss_newton(residuals, p0, max_iterations);

    PowerSeriesFit result;
    result.eta = gn.params[0];
    result.reference_saturation = gn.params[1];
    result.residual_norm = gn.residual_norm;
    result.iterations = gn.iterations;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolver(gn.normal_matrix);
    const double eig_min = eigensolver.eigenvalues().minCoeff();
    const double eig_max = eigensolver.eigenvalues().maxCoeff();
    result.normal_matrix_condition =
        eig_min > 0.0 ? eig_max / eig_min : std::numeric_limits<double>::infinity();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(gn.normal_matrix);
    if (lu.isInvertible()) {
        const Eigen::MatrixXd covariance = lu.inverse();
        result.eta_sigma = covariance(0, 0) > 0.0 ? std::sqrt(covariance(0, 0)) : 0.0;
        result.reference_saturation_sigma =
            covariance(1, 1) > 0.0 ? std::sqrt(covariance(1, 1)) : 0.0;
    } else {
        result.eta_sigma = std::numeric_limits<double>::infinity();
        result.reference_saturation_sigma = std::numeric_limits<double>::infinity();
    }
    return result;
}

}  // namespace molphase::fitting
