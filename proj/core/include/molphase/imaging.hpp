#pragma once

#include <iosfwd>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::imaging {

// Amplitude-overlap coupling at lateral offset r from the molecule:
// eta(r) = eta_peak exp(-4 ln2 r^2 / fwhm^2).
double eta_at(double x_um, double y_um, double molecule_x_um, double molecule_y_um,
              double spot_fwhm_um, double eta_peak);

struct ImageConfig {
    double spot_fwhm_um = 0.5;
    double pixel_pitch_um = 0.05;
    double halfwidth_um = 1.0;        // image spans [-halfwidth, +halfwidth]
    double molecule_x_um = 0.0;
    double molecule_y_um = 0.0;
    double delta_split_gamma = 114.3 / 21.0;  // two-beam split for the detuned rasters
    double saturation = 0.0;
    double psi_gradient_per_um = 0.0;  // optional linear psi(x) for axial misalignment
};

// Row-major rasters; pixel (ix, iy) lives at index iy * nx + ix.
struct Rasters {
    std::vector<double> xs_um, ys_um;
    std::size_t nx = 0, ny = 0;
    std::vector<double> phase_rad;             // beat phase, beams at -+delta/2
    std::vector<double> extinction_detuned;    // observed two-beam extinction
    std::vector<double> extinction_resonant;   // single beam tuned on resonance

    double at(const std::vector<double>& plane, std::size_t ix, std::size_t iy) const {
        return plane[iy * nx + ix];
    }
};

// Scans the focal spot across the molecule: per pixel the local coupling is
// evaluated and the per-beam transmissions at Delta = -+delta/2 (and at
// Delta = 0 for the resonant raster) produce the three images.
Rasters render_images(const EmitterParams& emitter, const ImageConfig& config);

// CSV schema: x_um, y_um, phase_deg, extinction_detuned, extinction_resonant.
void write_image_csv(std::ostream& os, const Rasters& rasters);

// Peak |phase| (radians) divided by peak extinction for a single beam parked
// at the given detuning; approaches Delta/Gamma in the wings.  Only defined
// outside the core of the line (|delta| >= 2).
double contrast_ratio(const EmitterParams& emitter, double delta_gamma);

}  // namespace molphase::imaging
