#include "molphase/steadystate.hpp"

#include <algorithm>
#include <cmath>

namespace molphase::steadystate {

namespace {

// Golden-section maximization of f on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol, double* argmax) {
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (a + b);
    if (argmax) *argmax = x;
    return f(x);
}

}  // namespace

std::complex<double> transmission_normalized(double eta, double psi_rad, double delta_gamma,
                                             double saturation) {
    const std::complex<double> lorentz(1.0, 2.0 * delta_gamma);
    const double denom = 4.0 * delta_gamma * delta_gamma + 1.0 + saturation;
    return 1.0 - eta * std::exp(std::complex<double>(0.0, -psi_rad)) * lorentz / denom;
}

ComplexTransmission transmission(const EmitterParams& emitter, const DriveField& drive) {
    return ComplexTransmission::from_t(transmission_normalized(
        emitter.eta, emitter.psi_rad, drive.detuning_gamma(), drive.saturation()));
}

std::pair<WeakFieldExtremum, WeakFieldExtremum> weak_field_extrema(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw OutOfRange("eta", "must lie in [0, 1]");
    const double phi = std::asin(eta / (2.0 - eta));
    const double delta = 0.5 * std::sqrt(1.0 - eta);
    return {WeakFieldExtremum{-phi, delta}, WeakFieldExtremum{phi, -delta}};
}

std::vector<SpectrumRow> spectrum(const EmitterParams& emitter, double saturation,
                                  std::span<const double> delta_grid_gamma) {
    if (delta_grid_gamma.empty()) throw EmptyGrid();
    for (std::size_t i = 1; i < delta_grid_gamma.size(); ++i)
        if (!(delta_grid_gamma[i] > delta_grid_gamma[i - 1]))
            throw EmptyGrid("grid must be strictly increasing");

    std::vector<SpectrumRow> rows;
    rows.reserve(delta_grid_gamma.size());
    for (double delta : delta_grid_gamma) {
        const auto t = transmission_normalized(emitter.eta, emitter.psi_rad, delta, saturation);
        rows.push_back({delta, t, std::arg(t), 1.0 - std::norm(t)});
    }
    return rows;
}

double two_beam_observed_dip(double single_beam_extinction) {
    if (!(single_beam_extinction >= 0.0 && single_beam_extinction <= 1.0))
        throw OutOfRange("single_beam_extinction", "must lie in [0, 1]");
    return 0.5 * single_beam_extinction;
}

double max_abs_phase(double eta, double psi_rad, double saturation, double* argmax_delta_gamma) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw OutOfRange("eta", "must lie in [0, 1]");
    if (!(saturation >= 0.0)) throw OutOfRange("saturation", "must be >= 0");

    const double hi = 10.0 * (1.0 + std::sqrt(saturation));
    const double tol = 1e-10;
    const auto abs_phase = [&](double delta) {
        return std::abs(std::arg(transmission_normalized(eta, psi_rad, delta, saturation)));
    };

    double arg_pos = 0.0;
    const double best_pos = golden_max(abs_phase, 0.0, hi, tol, &arg_pos);
    if (psi_rad == 0.0) {
        // Even/odd symmetry: the negative branch mirrors the positive one.
        if (argmax_delta_gamma) *argmax_delta_gamma = arg_pos;
        return best_pos;
    }

    double arg_neg = 0.0;
    const double best_neg = golden_max(abs_phase, -hi, 0.0, tol, &arg_neg);
    if (argmax_delta_gamma) *argmax_delta_gamma = best_pos >= best_neg ? arg_pos : arg_neg;
    return std::max(best_pos, best_neg);
}

std::vector<SaturationRow> saturation_asymptotics(const EmitterParams& emitter,
                                                  std::span<const double> saturations) {
    std::vector<SaturationRow> rows;
    rows.reserve(saturations.size());
    for (double s : saturations) {
        if (!(s > 0.0)) throw OutOfRange("saturation", "must be > 0");
        const double t0 = 1.0 - emitter.eta / (1.0 + s);
        double argmax = 0.0;
        const double phase = max_abs_phase(emitter.eta, emitter.psi_rad, s, &argmax);
        rows.push_back({s, 1.0 - t0 * t0, phase, argmax});
    }
    return rows;
}

double extinction_fwhm(const EmitterParams& emitter, double saturation) {
    if (!(saturation >= 0.0)) throw OutOfRange("saturation", "must be >= 0");
    const auto ext = [&](double delta) {
        return 1.0 - std::norm(transmission_normalized(emitter.eta, emitter.psi_rad, delta,
                                                       saturation));
    };
    const double half = 0.5 * ext(0.0);
    // The wing is monotone beyond the peak; bracket the crossing generously.
    double lo = 0.0, hi = 2.0 * std::sqrt(1.0 + saturation);
    while (ext(hi) > half) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ext(mid) > half ? lo : hi) = mid;
    }
    return 2.0 * 0.5 * (lo + hi);
}

}  // namespace molphase::steadystate
