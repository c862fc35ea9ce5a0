#include "molphase/params.hpp"

namespace molphase {

EmitterParams validate(const EmitterParams& emitter) {
    if (!(emitter.gamma_mhz > 0.0) || !std::isfinite(emitter.gamma_mhz))
        throw OutOfRange("gamma", "must be > 0");
    if (!std::isfinite(emitter.omega0_mhz))
        throw OutOfRange("omega0", "must be finite");
    if (!(emitter.eta >= 0.0 && emitter.eta <= 1.0))
        throw OutOfRange("eta", "must lie in [0, 1]");
    if (!(emitter.psi_rad > -kPi && emitter.psi_rad <= kPi))
        throw OutOfRange("psi", "must lie in (-pi, pi]");
    if (!(emitter.tau_ns > 0.0) || !std::isfinite(emitter.tau_ns))
        throw OutOfRange("tau", "must be > 0");
    return emitter;
}

DriveField DriveField::from_saturation(double detuning_mhz, double saturation, double gamma_mhz) {
    if (!(gamma_mhz > 0.0)) throw OutOfRange("gamma", "must be > 0");
    if (!(saturation >= 0.0) || !std::isfinite(saturation))
        throw OutOfRange("saturation", "must be >= 0");
    if (!std::isfinite(detuning_mhz)) throw OutOfRange("detuning", "must be finite");
    return DriveField(detuning_mhz / gamma_mhz, saturation, gamma_mhz);
}

DriveField DriveField::from_rabi(double detuning_mhz, double rabi_mhz, double gamma_mhz) {
    if (!(gamma_mhz > 0.0)) throw OutOfRange("gamma", "must be > 0");
    if (!(rabi_mhz >= 0.0) || !std::isfinite(rabi_mhz))
        throw OutOfRange("rabi", "must be >= 0");
    const double ratio = rabi_mhz / gamma_mhz;
    return from_saturation(detuning_mhz, 2.0 * ratio * ratio, gamma_mhz);
}

DriveField DriveField::with_detuning_mhz(double detuning_mhz) const {
    return DriveField(detuning_mhz / gamma_mhz_, saturation_, gamma_mhz_);
}

DriveField drive_from_power(double relative_power, double reference_saturation,
                            double gamma_mhz, double detuning_mhz) {
    if (!(relative_power >= 0.0)) throw OutOfRange("relative_power", "must be >= 0");
    if (!(reference_saturation > 0.0)) throw OutOfRange("reference_saturation", "must be > 0");
    return DriveField::from_saturation(detuning_mhz, relative_power * reference_saturation,
                                       gamma_mhz);
}

}  // namespace molphase
