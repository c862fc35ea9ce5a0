#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::heterodyne {

struct DetectionConfig {
    double beat_frequency_mhz = 114.3;  // AOM offset between the beams
    double mean_count_rate = 1.0e6;     // counts/s at unit mean intensity
    double duration_s = 1.0;
    int bins_per_period = 64;
    double jitter_sigma_ps = 0.0;       // Gaussian timing jitter per photon
    double dark_rate = 0.0;             // optional flat background, counts/s
    std::uint64_t seed = 1;
    int shards = 1;  // duration split into substreams; result is shard-count independent

    double period_s() const { return 1.0 / (beat_frequency_mhz * 1e6); }
    void validate() const;
};

// Periodic beating intensity I(t) = mean + amplitude cos(2 pi t/period + phase),
// normalized so two unit beams of equal power give mean 1.
struct BeatIntensity {
    double mean = 1.0;
    double amplitude = 0.0;
    double phase_rad = 0.0;
    double period_s = 1.0;

    double operator()(double t_s) const;
    double max() const { return mean + amplitude; }
    double visibility() const { return mean > 0.0 ? amplitude / mean : 0.0; }
};

// Beat waveform of two transmitted beams equalized in incident power:
//   I(t) = (|t1|^2 + |t2|^2)/2 + |t1||t2| cos(2 pi delta t + arg(t1 conj t2)).
BeatIntensity synthesize_intensity(std::complex<double> t1, std::complex<double> t2,
                                   const DetectionConfig& config);

// Inhomogeneous Poisson arrivals by thinning against max I, each perturbed by
// the configured Gaussian jitter.  Bit-identical for a given seed; sharded
// substreams are merged as a sorted concatenation so the output does not
// depend on how the work is split.
std::vector<double> sample_photons(const BeatIntensity& intensity,
                                   const DetectionConfig& config);

struct Histogram {
    std::vector<double> bin_center_s;
    std::vector<std::uint64_t> counts;
    double period_s = 0.0;

    std::uint64_t total() const;
};

// Arrival times folded modulo the beat period into the configured bins.
Histogram start_stop_histogram(std::span<const double> arrivals_s,
                               const DetectionConfig& config);

// Fixed export schema: two columns, bin_center_ps and counts.
void write_histogram_csv(std::ostream& os, const Histogram& histogram);

struct BeatFit {
    double offset = 0.0;       // counts per bin
    double amplitude = 0.0;    // counts per bin
    double phase_rad = 0.0;
    double visibility = 0.0;
    double phase_sigma_rad = 0.0;       // shot-noise estimate sqrt(2/N)/V
    double visibility_sigma = 0.0;      // sqrt((2+V^2)/N)
    std::uint64_t total_counts = 0;
};

// Least-squares fit of offset + amplitude cos(2 pi t/T + phase) over the bins.
// Throws DegenerateFit when the visibility is below three times its own
// uncertainty (or when fewer than 1000 counts were histogrammed).
BeatFit fit_beat(const Histogram& histogram, const DetectionConfig& config);

struct PhasePoint {
    double center_detuning_gamma;  // two-beam center relative to the resonance
    double phase_rad;
    double phase_sigma_rad;
    double visibility;
};

// Full chain per scan point: transmission -> beat -> photons -> histogram ->
// fit.  Uses the closed-form per-beam transmission in the weak field and the
// harmonic solver above saturation 0.1.
std::vector<PhasePoint> end_to_end_phase(const EmitterParams& emitter,
                                         double delta_split_gamma, double saturation,
                                         std::span<const double> center_detunings_gamma,
                                         const DetectionConfig& config);

}  // namespace molphase::heterodyne
