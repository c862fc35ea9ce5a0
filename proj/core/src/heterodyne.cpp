#include "molphase/heterodyne.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "molphase/floquet.hpp"
#include "molphase/rng.hpp"
#include "molphase/steadystate.hpp"

namespace molphase::heterodyne {

void DetectionConfig::validate() const {
    if (!(beat_frequency_mhz > 0.0)) throw OutOfRange("beat_frequency", "must be > 0");
    if (!(mean_count_rate >= 0.0)) throw OutOfRange("mean_count_rate", "must be >= 0");
    if (!(duration_s >= 0.0)) throw OutOfRange("duration", "must be >= 0");
    if (bins_per_period < 8) throw OutOfRange("bins_per_period", "must be >= 8");
    if (!(jitter_sigma_ps >= 0.0)) throw OutOfRange("jitter_sigma", "must be >= 0");
    if (!(dark_rate >= 0.0)) throw OutOfRange("dark_rate", "must be >= 0");
    if (shards < 1) throw OutOfRange("shards", "must be >= 1");
}

double BeatIntensity::operator()(double t_s) const {
    return mean + amplitude * std::cos(2.0 * kPi * t_s / period_s + phase_rad);
}

BeatIntensity synthesize_intensity(std::complex<double> t1, std::complex<double> t2,
                                   const DetectionConfig& config) {
    if (std::abs(t1) > 1.0 + 1e-12 || std::abs(t2) > 1.0 + 1e-12)
        throw OutOfRange("transmission", "|t| must not exceed 1");
    config.validate();
    BeatIntensity intensity;
    intensity.mean = 0.5 * (std::norm(t1) + std::norm(t2));
    intensity.amplitude = std::abs(t1) * std::abs(t2);
    intensity.phase_rad = std::arg(t1 * std::conj(t2));
    intensity.period_s = config.period_s();
    return intensity;
}

std::vector<double> sample_photons(const BeatIntensity& intensity,
                                   const DetectionConfig& config) {
    config.validate();
    std::vector<double> arrivals;
    const double rate_max = config.mean_count_rate * intensity.max() + config.dark_rate;
    if (rate_max <= 0.0 || config.duration_s <= 0.0) return arrivals;

    arrivals.reserve(static_cast<std::size_t>(
        std::min(1e8, config.mean_count_rate * intensity.mean * config.duration_s * 1.1 + 64.0)));
    const double jitter_s = config.jitter_sigma_ps * 1e-12;

    for (int shard = 0; shard < config.shards; ++shard) {
        Xoshiro256ss rng(derive_stream_seed(config.seed, static_cast<std::uint64_t>(shard)));
        const double t_begin = config.duration_s * shard / config.shards;
        const double t_end = config.duration_s * (shard + 1) / config.shards;
        double t = t_begin;
        for (;;) {
            t += rng.exponential() / rate_max;
            if (t >= t_end) break;
            const double rate = config.mean_count_rate * intensity(t) + config.dark_rate;
            if (rng.uniform() * rate_max < rate) {
                const double arrival =
                    jitter_s > 0.0 ? t + jitter_s * rng.normal() : t;
                arrivals.push_back(arrival);
            }
        }
    }
    std::sort(arrivals.begin(), arrivals.end());
    return arrivals;
}

Histogram start_stop_histogram(std::span<const double> arrivals_s,
                               const DetectionConfig& config) {
    config.validate();
    if (arrivals_s.empty()) throw EmptyData("no arrivals to histogram");

    Histogram histogram;
    histogram.period_s = config.period_s();
    const int bins = config.bins_per_period;
    histogram.counts.assign(static_cast<std::size_t>(bins), 0);
    histogram.bin_center_s.resize(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i)
        histogram.bin_center_s[static_cast<std::size_t>(i)] =
            (i + 0.5) * histogram.period_s / bins;

    for (double a : arrivals_s) {
        double folded = std::fmod(a, histogram.period_s);
        if (folded < 0.0) folded += histogram.period_s;
        auto idx = static_cast<std::size_t>(folded / histogram.period_s * bins);
        if (idx >= histogram.counts.size()) idx = histogram.counts.size() - 1;
        ++histogram.counts[idx];
    }
    return histogram;
}

std::uint64_t Histogram::total() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

void write_histogram_csv(std::ostream& os, const Histogram& histogram) {
    os << "bin_center_ps,counts\n";
    char buf[64];
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", histogram.bin_center_s[i] * 1e12);
        os << buf << ',' << histogram.counts[i] << '\n';
    }
}

BeatFit fit_beat(const Histogram& histogram, const DetectionConfig& config) {
    config.validate();
    const std::uint64_t total = histogram.total();
    if (total < 1000) throw DegenerateFit("need at least 1000 counts for a beat fit");

    // Linear least squares for offset + p cos(theta) + q sin(theta); the bins
    // are uniform in theta, so the normal matrix is nearly diagonal.
    double s_cc = 0.0, s_ss = 0.0, s_cs = 0.0, s_c = 0.0, s_s = 0.0;
    double y_sum = 0.0, y_c = 0.0, y_s = 0.0;
    const std::size_t bins = histogram.counts.size();
    for (std::size_t i = 0; i < bins; ++i) {
        const double theta = 2.0 * kPi * histogram.bin_center_s[i] / histogram.period_s;
        const double c = std::cos(theta), s = std::sin(theta);
        const double y = static_cast<double>(histogram.counts[i]);
        s_cc += c * c;
        s_ss += s * s;
        s_cs += c * s;
        s_c += c;
        s_s += s;
        y_sum += y;
        y_c += y * c;
        y_s += y * s;
    }
    const double n = static_cast<double>(bins);
    // Solve the 3x3 normal equations by explicit elimination.
    double m[3][4] = {{n, s_c, s_s, y_sum},
                      {s_c, s_cc, s_cs, y_c},
                      {s_s, s_cs, s_ss, y_s}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[pivot], m[col]);
        if (std::abs(m[col][col]) < 1e-14) throw DegenerateFit("singular beat-fit system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    const double offset = m[0][3] / m[0][0];
    const double p = m[1][3] / m[1][1];
    const double q = m[2][3] / m[2][2];

    BeatFit fit;
    fit.offset = offset;
    fit.amplitude = std::hypot(p, q);
    fit.phase_rad = std::atan2(-q, p);
    fit.visibility = offset > 0.0 ? fit.amplitude / offset : 0.0;
    fit.total_counts = total;
    const double n_counts = static_cast<double>(total);
    fit.visibility_sigma = std::sqrt((2.0 + fit.visibility * fit.visibility) / n_counts);
    fit.phase_sigma_rad =
        fit.visibility > 0.0 ? std::sqrt(2.0 / n_counts) / fit.visibility : kPi;
    if (fit.visibility < 3.0 * fit.visibility_sigma)
        throw DegenerateFit("beat visibility below three times its uncertainty");
    return fit;
}

std::vector<PhasePoint> end_to_end_phase(const EmitterParams& emitter,
                                         double delta_split_gamma, double saturation,
                                         std::span<const double> center_detunings_gamma,
                                         const DetectionConfig& config) {
    validate(emitter);
    config.validate();

    std::vector<PhasePoint> points;
    points.reserve(center_detunings_gamma.size());
    std::uint64_t point_index = 0;
    for (double center : center_detunings_gamma) {
        const double d1 = center - 0.5 * delta_split_gamma;
        const double d2 = center + 0.5 * delta_split_gamma;
        std::complex<double> t1, t2;
        if (saturation > 0.1) {
            floquet::BichromaticDrive drive;
            drive.rabi1_gamma = std::sqrt(saturation / 2.0);
            drive.rabi2_gamma = drive.rabi1_gamma;
            drive.delta_split_gamma = delta_split_gamma;
            drive.detuning1_gamma = d1;
            const auto view =
                floquet::corrected_single_beam(floquet::solve_adaptive(emitter, drive), emitter);
            t1 = view.t1;
            t2 = view.t2;
        } else {
            t1 = steadystate::transmission_normalized(emitter.eta, emitter.psi_rad, d1,
                                                      saturation);
            t2 = steadystate::transmission_normalized(emitter.eta, emitter.psi_rad, d2,
                                                      saturation);
        }

        DetectionConfig point_config = config;
        point_config.seed = derive_stream_seed(config.seed, 0x5ca10000ULL + point_index);
        const auto intensity = synthesize_intensity(t1, t2, point_config);
        const auto arrivals = sample_photons(intensity, point_config);
        const auto histogram = start_stop_histogram(arrivals, point_config);
        const auto fit = fit_beat(histogram, point_config);
        points.push_back({center, fit.phase_rad, fit.phase_sigma_rad, fit.visibility});
        ++point_index;
    }
    return points;
}

}  // namespace molphase::heterodyne
