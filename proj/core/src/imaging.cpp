#include "molphase/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "molphase/steadystate.hpp"

namespace molphase::imaging {

double eta_at(double x_um, double y_um, double molecule_x_um, double molecule_y_um,
              double spot_fwhm_um, double eta_peak) {
    if (!(spot_fwhm_um > 0.0)) throw OutOfRange("spot_fwhm", "must be > 0");
    const double dx = x_um - molecule_x_um;
    const double dy = y_um - molecule_y_um;
    const double r2 = dx * dx + dy * dy;
    return eta_peak * std::exp(-4.0 * std::log(2.0) * r2 / (spot_fwhm_um * spot_fwhm_um));
}

namespace {

// Symmetric axis with exact +-x pairs so a centered image is bit-symmetric.
std::vector<double> make_axis(double halfwidth_um, double pitch_um) {
    const auto half_count = static_cast<long>(std::round(halfwidth_um / pitch_um));
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(2 * half_count + 1));
    for (long i = -half_count; i <= half_count; ++i)
        axis.push_back(static_cast<double>(i) * pitch_um);
    return axis;
}

}  // namespace

Rasters render_images(const EmitterParams& emitter, const ImageConfig& config) {
    validate(emitter);
    if (!(config.pixel_pitch_um > 0.0)) throw OutOfRange("pixel_pitch", "must be > 0");
    if (!(config.halfwidth_um >= config.pixel_pitch_um))
        throw EmptyGrid("image halfwidth smaller than one pixel");

    Rasters rasters;
    rasters.xs_um = make_axis(config.halfwidth_um, config.pixel_pitch_um);
    rasters.ys_um = rasters.xs_um;
    rasters.nx = rasters.xs_um.size();
    rasters.ny = rasters.ys_um.size();
    const std::size_t n = rasters.nx * rasters.ny;
    rasters.phase_rad.resize(n);
    rasters.extinction_detuned.resize(n);
    rasters.extinction_resonant.resize(n);

    const double half_split = 0.5 * config.delta_split_gamma;
    for (std::size_t iy = 0; iy < rasters.ny; ++iy) {
        for (std::size_t ix = 0; ix < rasters.nx; ++ix) {
            const double x = rasters.xs_um[ix];
            const double y = rasters.ys_um[iy];
            const double eta = eta_at(x, y, config.molecule_x_um, config.molecule_y_um,
                                      config.spot_fwhm_um, emitter.eta);
            const double psi =
                emitter.psi_rad + config.psi_gradient_per_um * (x - config.molecule_x_um);

            const auto t1 = steadystate::transmission_normalized(eta, psi, -half_split,
                                                                 config.saturation);
            const auto t2 = steadystate::transmission_normalized(eta, psi, +half_split,
                                                                 config.saturation);
            const auto t_res =
                steadystate::transmission_normalized(eta, psi, 0.0, config.saturation);

            const std::size_t idx = iy * rasters.nx + ix;
            rasters.phase_rad[idx] = std::arg(t1 * std::conj(t2));
            rasters.extinction_detuned[idx] = 1.0 - 0.5 * (std::norm(t1) + std::norm(t2));
            rasters.extinction_resonant[idx] = 1.0 - std::norm(t_res);
        }
    }
    return rasters;
}

void write_image_csv(std::ostream& os, const Rasters& rasters) {
    os << "x_um,y_um,phase_deg,extinction_detuned,extinction_resonant\n";
    char buf[160];
    for (std::size_t iy = 0; iy < rasters.ny; ++iy) {
        for (std::size_t ix = 0; ix < rasters.nx; ++ix) {
            const std::size_t idx = iy * rasters.nx + ix;
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n",
                          rasters.xs_um[ix], rasters.ys_um[iy],
                          deg_from_rad(rasters.phase_rad[idx]),
                          rasters.extinction_detuned[idx], rasters.extinction_resonant[idx]);
            os << buf;
        }
    }
}

double contrast_ratio(const EmitterParams& emitter, double delta_gamma) {
    validate(emitter);
    if (std::abs(delta_gamma) < 2.0)
        throw OutOfRange("delta", "contrast ratio defined in the wings, |delta| >= 2");
    const auto t =
        steadystate::transmission_normalized(emitter.eta, emitter.psi_rad, delta_gamma, 0.0);
    const double extinction = 1.0 - std::norm(t);
    if (!(extinction > 0.0)) throw OutOfRange("eta", "no contrast without coupling");
    return std::abs(std::arg(t)) / extinction;
}

}  // namespace molphase::imaging
