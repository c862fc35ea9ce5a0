#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "molphase/errors.hpp"

namespace molphase {

inline constexpr double kPi = std::numbers::pi;

inline double deg_from_rad(double rad) { return rad * 180.0 / kPi; }
inline double rad_from_deg(double deg) { return deg * kPi / 180.0; }

// Linewidth/lifetime link for Gamma given as a linear frequency:
// Gamma[Hz] = 1/(2 pi tau[s]).  This is the single place the angular-vs-linear
// convention enters; all spectra depend only on the ratios Delta/Gamma and
// Omega/Gamma and are unaffected by the choice.
inline double gamma_mhz_from_tau_ns(double tau_ns) {
    if (!(tau_ns > 0.0)) throw OutOfRange("tau", "must be > 0");
    return 1.0e3 / (2.0 * kPi * tau_ns);
}

inline double tau_ns_from_gamma_mhz(double gamma_mhz) {
    if (!(gamma_mhz > 0.0)) throw OutOfRange("gamma", "must be > 0");
    return 1.0e3 / (2.0 * kPi * gamma_mhz);
}

// Two-level emitter as seen by a focused beam.  Frequencies are linear (MHz)
// at the I/O boundary; everything downstream works in Gamma-normalized units.
struct EmitterParams {
    double gamma_mhz = 21.0;  // linewidth FWHM
    double omega0_mhz = 0.0;  // resonance offset from the scan reference
    double eta = 0.1;         // coupling efficiency, geometric x spectral
    double psi_rad = 0.0;     // residual geometric phase beyond the -pi/2 Gouy reference
    double tau_ns = tau_ns_from_gamma_mhz(21.0);  // excited-state lifetime
};

// Returns the input unchanged if all invariants hold, throws OutOfRange otherwise.
EmitterParams validate(const EmitterParams& emitter);

// One laser beam.  The saturation parameter S = 2 Omega^2 / Gamma^2 is the
// stored strength; the Rabi frequency is derived so the two stay consistent
// by construction.  The detuning is frozen in Gamma units at build time so a
// drive cannot silently be re-normalized against a different emitter.
class DriveField {
public:
    static DriveField from_saturation(double detuning_mhz, double saturation, double gamma_mhz);
    static DriveField from_rabi(double detuning_mhz, double rabi_mhz, double gamma_mhz);

    double detuning_mhz() const { return detuning_gamma_ * gamma_mhz_; }
    double detuning_gamma() const { return detuning_gamma_; }
    double saturation() const { return saturation_; }
    double rabi_mhz() const { return gamma_mhz_ * rabi_gamma(); }
    double rabi_gamma() const { return std::sqrt(saturation_ / 2.0); }
    double gamma_mhz() const { return gamma_mhz_; }

    DriveField with_detuning_mhz(double detuning_mhz) const;

private:
    DriveField(double detuning_gamma, double saturation, double gamma_mhz)
        : detuning_gamma_(detuning_gamma), saturation_(saturation), gamma_mhz_(gamma_mhz) {}

    double detuning_gamma_;
    double saturation_;
    double gamma_mhz_;
};

// Maps a relative incident power to a drive: S = relative_power * reference_saturation.
DriveField drive_from_power(double relative_power, double reference_saturation,
                            double gamma_mhz = 1.0, double detuning_mhz = 0.0);

// Complex field transmission t with its derived observables.
struct ComplexTransmission {
    std::complex<double> t{1.0, 0.0};
    double phase_rad = 0.0;  // arg(t), principal value
    double extinction = 0.0; // 1 - |t|^2

    static ComplexTransmission from_t(std::complex<double> t) {
        return {t, std::arg(t), 1.0 - std::norm(t)};
    }
    double phase_deg() const { return deg_from_rad(phase_rad); }
};

}  // namespace molphase
