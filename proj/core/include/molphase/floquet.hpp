#pragma once

#include <complex>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::floquet {

// Two beams split by delta = omega2 - omega1, expressed in the frame rotating
// at omega1.  All rates in Gamma units.
struct BichromaticDrive {
    double rabi1_gamma = 0.0;
    double rabi2_gamma = 0.0;
    double delta_split_gamma = 1.0;   // omega2 - omega1, nonzero
    double detuning1_gamma = 0.0;     // omega1 - omega0

    double detuning2_gamma() const { return detuning1_gamma + delta_split_gamma; }
    void validate() const;
};

// Fourier components of the steady-periodic density matrix,
//   coh(t) = sum_n coh_n e^{i n delta t},   w(t) = sum_n w_n e^{i n delta t},
// with w_{-n} = conj(w_n) since the inversion is real.  Harmonic n of the
// coherence radiates at the lab frequency omega1 - n delta, so n = -1 is the
// component at the second beam's frequency.
class HarmonicSet {
public:
    HarmonicSet(int truncation, const BichromaticDrive& drive);

    int truncation() const { return n_; }
    const BichromaticDrive& drive() const { return drive_; }

    std::complex<double>& coh(int n) { return coh_[idx(n)]; }
    std::complex<double> coh(int n) const { return coh_[idx(n)]; }
    std::complex<double>& coh_conj(int n) { return coh_conj_[idx(n)]; }
    std::complex<double> coh_conj(int n) const { return coh_conj_[idx(n)]; }
    std::complex<double>& inversion(int n) { return w_[idx(n)]; }
    std::complex<double> inversion(int n) const { return w_[idx(n)]; }

    // Time-domain reconstruction at phase delta*t (radians).
    std::complex<double> coh_at(double phase) const;
    double inversion_at(double phase) const;

    // Dispersive-regime estimate -sum_i Omega_i^2 / (2 Delta_i) of the drive-
    // induced displacement of the resonance; meaningful for |Delta_i| >> 1.
    double ac_stark_estimate_gamma() const;

private:
    std::size_t idx(int n) const { return static_cast<std::size_t>(n + n_); }

    int n_;
    BichromaticDrive drive_;
    std::vector<std::complex<double>> coh_, coh_conj_, w_;
};

// Solves the block-tridiagonal linear system produced by inserting the
// harmonic ansatz into the Bloch equations, at fixed truncation N >= 1.
// Throws SingularSystem when an elimination pivot is singular.
HarmonicSet solve_harmonics(const EmitterParams& emitter, const BichromaticDrive& drive,
                            int truncation);

// Doubles the truncation (starting at n0) until the edge harmonics fall below
// `tail_tol` relative to the largest coherence harmonic; throws NotConverged
// when the cap is reached first.
HarmonicSet solve_adaptive(const EmitterParams& emitter, const BichromaticDrive& drive,
                           int n0 = 8, int cap = 64, double tail_tol = 1e-6);

// Detected intensity harmonics I_k = sum_n E_n conj(E_{n-k}) of the total
// transmitted field E(t) = Omega1 + Omega2 e^{-i delta t} + i eta e^{-i psi} coh(t)
// (in Rabi units).  I_{-k} = conj(I_k), so only k >= 0 is stored.
struct DetectorHarmonics {
    std::vector<std::complex<double>> intensity;  // index k = 0 .. 2N
    double incident_dc = 0.0;                     // Omega1^2 + Omega2^2

    double dc() const { return intensity.empty() ? 0.0 : intensity[0].real(); }
    std::complex<double> beat() const {
        return intensity.size() > 1 ? intensity[1] : std::complex<double>(0.0);
    }
    double beat_phase_rad = 0.0;  // arg(I_1)
    double beat_amplitude = 0.0;  // 2 |I_1|
    double visibility = 0.0;      // 2 |I_1| / I_0
    double observed_extinction = 0.0;  // 1 - I_0 / incident DC
};

DetectorHarmonics detector_harmonics(const HarmonicSet& harmonics, const EmitterParams& emitter);

// Equivalent single-beam observables, from the field components at the two
// beam frequencies: t1 = E_0/Omega1, t2 = E_{-1}/Omega2.  Reduces to the
// closed-form transmission per beam in the weak field.
struct SingleBeamView {
    std::complex<double> t1, t2;
    double phase1_rad, phase2_rad;
    double extinction1, extinction2;
};

SingleBeamView corrected_single_beam(const HarmonicSet& harmonics, const EmitterParams& emitter);

// Scan of detuning1 locating the auxiliary two-photon resonance in |coh_{-1}|.
// The feature is the most prominent interior local maximum of the scan; its
// displacement from the naive position delta_split is reported as the AC
// Stark shift.  Throws NotFound when no feature exceeds the prominence
// threshold (a documented operational choice).
struct HyperRamanScanPoint {
    double detuning1_gamma;
    double coh_m1_abs;
};

struct HyperRamanFeature {
    double position_gamma;        // refined location of the feature in Delta_1
    double ac_stark_shift_gamma;  // position - delta_split
    double peak_value;
    std::vector<HyperRamanScanPoint> scan;
};

HyperRamanFeature hyper_raman_scan(const EmitterParams& emitter,
                                   const BichromaticDrive& drive_template, double scan_min_gamma,
                                   double scan_max_gamma, int points,
                                   double prominence_frac = 0.02);

}  // namespace molphase::floquet
