#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::steadystate {

// Complex field transmission of a single beam,
//   t = 1 - eta e^{-i psi} (1 + 2 i d) / (4 d^2 + 1 + S),
// with d = Delta/Gamma and S = 2 Omega^2/Gamma^2.  Depends on the physical
// inputs only through these ratios.
std::complex<double> transmission_normalized(double eta, double psi_rad, double delta_gamma,
                                             double saturation);

ComplexTransmission transmission(const EmitterParams& emitter, const DriveField& drive);

// Weak-field phase extremum: phi = -sign(Delta) * arcsin(eta/(2-eta)) reached
// at Delta = +-(Gamma/2) sqrt(1-eta).
struct WeakFieldExtremum {
    double phi_rad;
    double delta_gamma;
};

// Returns the (positive-detuning, negative-detuning) extrema.
std::pair<WeakFieldExtremum, WeakFieldExtremum> weak_field_extrema(double eta);

struct SpectrumRow {
    double delta_gamma;
    std::complex<double> t;
    double phase_rad;
    double extinction;
};

// Row-wise transmission over a strictly increasing detuning grid (Gamma units).
std::vector<SpectrumRow> spectrum(const EmitterParams& emitter, double saturation,
                                  std::span<const double> delta_grid_gamma);

// With two beams on the detector, only half the detected power interacts
// resonantly at a time, so the observed dip is half the single-beam one.
double two_beam_observed_dip(double single_beam_extinction);

// Largest |arg t| over detuning at fixed saturation.  Bracketed golden-section
// on [0, 10 Gamma (1+sqrt(S))] per sign of Delta; for psi = 0 both signs give
// the same magnitude.  If argmax_delta_gamma is non-null it receives the
// location of the maximum (from the positive-detuning branch).
double max_abs_phase(double eta, double psi_rad, double saturation,
                     double* argmax_delta_gamma = nullptr);

struct SaturationRow {
    double saturation;
    double on_resonance_extinction;
    double max_phase_rad;
    double argmax_delta_gamma;
};

std::vector<SaturationRow> saturation_asymptotics(const EmitterParams& emitter,
                                                  std::span<const double> saturations);

// Full width at half maximum of the extinction spectrum, by bisecting the
// half-max crossings of the closed form; approaches Gamma sqrt(1+S).
double extinction_fwhm(const EmitterParams& emitter, double saturation);

}  // namespace molphase::steadystate
