#pragma once

#include <array>
#include <span>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::fitting {

// Parameters recovered from a joint extinction + phase spectrum.
struct SpectrumParams {
    double gamma_mhz = 21.0;
    double center_mhz = 0.0;   // molecular resonance on the scan axis
    double eta = 0.1;
    double psi_rad = 0.0;
    double baseline = 0.0;     // additive offset on the extinction channel
};
inline constexpr int kSpectrumParamCount = 5;

struct TwoBeamModelConfig {
    double delta_split_mhz = 114.3;
    double saturation = 0.0;
    // Above this saturation the forward model goes through the harmonic
    // solver instead of the closed-form per-beam superposition.
    double floquet_threshold = 0.1;
};

struct TwoBeamCurves {
    std::vector<double> extinction;  // observed two-beam dip (includes baseline)
    std::vector<double> phase_rad;   // beat phase
};

// Forward model for a scan of the two-beam center across the resonance.
TwoBeamCurves model_two_beam(const SpectrumParams& params, std::span<const double> grid_mhz,
                             const TwoBeamModelConfig& config);

struct SpectrumData {
    std::vector<double> grid_mhz;
    std::vector<double> extinction;
    std::vector<double> phase_rad;
    double sigma_extinction = 1.0;  // per-point noise, used as inverse-variance weight
    double sigma_phase_rad = 1.0;
};

struct FitResult {
    SpectrumParams params;
    std::array<double, kSpectrumParamCount> sigma{};  // 1-sigma from the normal matrix
    std::vector<double> covariance;  // row-major 5x5
    double residual_norm = 0.0;      // weighted, at the optimum
    int iterations = 0;
};

// Damped Gauss-Newton (Levenberg-style lambda schedule) on the joint weighted
// residual with central-difference Jacobians and wrapped phase differences.
// Throws NoConvergence / SingularCovariance.
FitResult fit(const SpectrumData& data, const SpectrumParams& guess,
              const TwoBeamModelConfig& config, int max_iterations = 200);

// Saturation-series fit (extinction dip and maximum phase versus relative
// power): recovers the coupling efficiency and the power-to-saturation
// calibration.  The phase channel may be empty (extinction-only fit).
struct PowerSeriesData {
    std::vector<double> relative_power;
    std::vector<double> extinction;
    std::vector<double> max_phase_rad;  // empty = extinction channel only
    double sigma_extinction_rel = 0.02;  // relative noise per decade point
    double sigma_phase_rel = 0.02;
};

struct PowerSeriesFit {
    double eta = 0.0;
    double reference_saturation = 0.0;  // S at relative power 1
    double eta_sigma = 0.0;
    double reference_saturation_sigma = 0.0;
    double normal_matrix_condition = 0.0;  // large = degenerate calibration
    double residual_norm = 0.0;
    int iterations = 0;
};

PowerSeriesFit fit_power_series(const PowerSeriesData& data, double eta_guess,
                                double reference_saturation_guess, int max_iterations = 200);

}  // namespace molphase::fitting
