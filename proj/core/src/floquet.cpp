#include "molphase/floquet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace molphase::floquet {

namespace {

using Block = Eigen::Matrix3cd;
using BlockVec = Eigen::Vector3cd;
using Cplx = std::complex<double>;

constexpr Cplx kI{0.0, 1.0};

// Unknown ordering per harmonic n: x_n = (coh_n, conj-coh_n, w_n).  The
// diagonal block couples the three at fixed n; the sub/super blocks carry the
// Omega2 sidebands (the e^{-i delta t} component of the drive).
Block diagonal_block(const BichromaticDrive& d, int n) {
    const double delta1 = d.detuning1_gamma;
    const double split = d.delta_split_gamma;
    const double omega1 = d.rabi1_gamma;
    Block a = Block::Zero();
    a(0, 0) = kI * (delta1 - n * split) - 0.5;
    a(0, 2) = kI * 0.5 * omega1;
    a(1, 1) = -kI * (delta1 + n * split) - 0.5;
    a(1, 2) = -kI * 0.5 * omega1;
    a(2, 0) = kI * omega1;
    a(2, 1) = -kI * omega1;
    a(2, 2) = -1.0 - kI * (n * split);
    return a;
}

Block sub_block(const BichromaticDrive& d) {  // couples x_{n-1}
    Block b = Block::Zero();
    b(1, 2) = -kI * 0.5 * d.rabi2_gamma;
    b(2, 0) = kI * d.rabi2_gamma;
    return b;
}

Block super_block(const BichromaticDrive& d) {  // couples x_{n+1}
    Block c = Block::Zero();
    c(0, 2) = kI * 0.5 * d.rabi2_gamma;
    c(2, 1) = -kI * d.rabi2_gamma;
    return c;
}

}  // namespace

void BichromaticDrive::validate() const {
    if (delta_split_gamma == 0.0) throw OutOfRange("delta_split", "must be nonzero");
    if (!(rabi1_gamma >= 0.0)) throw OutOfRange("rabi1", "must be >= 0");
    if (!(rabi2_gamma >= 0.0)) throw OutOfRange("rabi2", "must be >= 0");
}

HarmonicSet::HarmonicSet(int truncation, const BichromaticDrive& drive)
    : n_(truncation),
      drive_(drive),
      coh_(2 * truncation + 1),
      coh_conj_(2 * truncation + 1),
      w_(2 * truncation + 1) {}

std::complex<double> HarmonicSet::coh_at(double phase) const {
    Cplx sum = 0.0;
    for (int n = -n_; n <= n_; ++n) sum += coh(n) * std::exp(kI * (n * phase));
    return sum;
}

double HarmonicSet::inversion_at(double phase) const {
    Cplx sum = 0.0;
    for (int n = -n_; n <= n_; ++n) sum += inversion(n) * std::exp(kI * (n * phase));
    return sum.real();
}

double HarmonicSet::ac_stark_estimate_gamma() const {
    double shift = 0.0;
    const double d1 = drive_.detuning1_gamma;
    const double d2 = drive_.detuning2_gamma();
    if (std::abs(d1) > 1e-9)
        shift -= drive_.rabi1_gamma * drive_.rabi1_gamma / (2.0 * d1);
    if (std::abs(d2) > 1e-9)
        shift -= drive_.rabi2_gamma * drive_.rabi2_gamma / (2.0 * d2);
    return shift;
}

HarmonicSet solve_harmonics(const EmitterParams& emitter, const BichromaticDrive& drive,
                            int truncation) {
    validate(emitter);
    drive.validate();
    if (truncation < 1) throw OutOfRange("truncation", "must be >= 1");

    const int n_blocks = 2 * truncation + 1;
    const Block b = sub_block(drive);
    const Block c = super_block(drive);

    // Block Thomas algorithm: forward elimination, then back substitution.
    std::vector<Block> gain(static_cast<std::size_t>(n_blocks));
    std::vector<BlockVec> partial(static_cast<std::size_t>(n_blocks));

    BlockVec rhs_zero = BlockVec::Zero();
    for (int k = 0; k < n_blocks; ++k) {
        const int n = k - truncation;
        Block d = diagonal_block(drive, n);
        BlockVec r = rhs_zero;
        if (n == 0) r(2) = -1.0;  // inhomogeneity from spontaneous decay
        if (k > 0) {
            d -= b * gain[static_cast<std::size_t>(k - 1)];
            r -= b * partial[static_cast<std::size_t>(k - 1)];
        }
        Eigen::FullPivLU<Block> lu(d);
        if (!lu.isInvertible())
            throw SingularSystem("degenerate pivot in the harmonic elimination; retry with a "
                                 "larger truncation");
        gain[static_cast<std::size_t>(k)] = lu.solve(c);
        partial[static_cast<std::size_t>(k)] = lu.solve(r);
    }

    HarmonicSet out(truncation, drive);
    BlockVec x = partial[static_cast<std::size_t>(n_blocks - 1)];
    for (int k = n_blocks - 1; k >= 0; --k) {
        if (k < n_blocks - 1)
            x = partial[static_cast<std::size_t>(k)] - gain[static_cast<std::size_t>(k)] * x;
        const int n = k - truncation;
        out.coh(n) = x(0);
        out.coh_conj(n) = x(1);
        out.inversion(n) = x(2);
    }
    return out;
}

namespace {

double tail_ratio(const HarmonicSet& h) {
    double peak = 0.0;
    for (int n = -h.truncation(); n <= h.truncation(); ++n)
        peak = std::max(peak, std::abs(h.coh(n)));
    if (peak == 0.0) return 0.0;
    const double edge =
        std::max(std::abs(h.coh(h.truncation())), std::abs(h.coh(-h.truncation())));
    return edge / peak;
}

}  // namespace

HarmonicSet solve_adaptive(const EmitterParams& emitter, const BichromaticDrive& drive, int n0,
                           int cap, double tail_tol) {
    for (int n = n0; n <= cap; n *= 2) {
        HarmonicSet h = solve_harmonics(emitter, drive, n);
        if (tail_ratio(h) < tail_tol) return h;
    }
    throw NotConverged("harmonic tail above tolerance at the truncation cap");
}

DetectorHarmonics detector_harmonics(const HarmonicSet& harmonics, const EmitterParams& emitter) {
    const auto& drive = harmonics.drive();
    const int n_max = harmonics.truncation();
    const Cplx scatter_coupling = kI * emitter.eta * std::exp(-kI * emitter.psi_rad);

    // Transmitted-field harmonics in Rabi units.
    std::vector<Cplx> field(static_cast<std::size_t>(2 * n_max + 1));
    const auto fidx = [n_max](int n) { return static_cast<std::size_t>(n + n_max); };
    for (int n = -n_max; n <= n_max; ++n) field[fidx(n)] = scatter_coupling * harmonics.coh(n);
    field[fidx(0)] += drive.rabi1_gamma;
    field[fidx(-1)] += drive.rabi2_gamma;

    DetectorHarmonics out;
    out.incident_dc = drive.rabi1_gamma * drive.rabi1_gamma +
                      drive.rabi2_gamma * drive.rabi2_gamma;
    out.intensity.assign(static_cast<std::size_t>(2 * n_max + 1), Cplx{0.0});
    for (int k = 0; k <= 2 * n_max; ++k) {
        Cplx sum = 0.0;
        for (int n = -n_max; n <= n_max; ++n) {
            const int m = n - k;
            if (m < -n_max || m > n_max) continue;
            sum += field[fidx(n)] * std::conj(field[fidx(m)]);
        }
        out.intensity[static_cast<std::size_t>(k)] = sum;
    }

    const double dc = out.dc();
    out.beat_phase_rad = std::arg(out.beat());
    out.beat_amplitude = 2.0 * std::abs(out.beat());
    out.visibility = dc > 0.0 ? out.beat_amplitude / dc : 0.0;
    out.observed_extinction = out.incident_dc > 0.0 ? 1.0 - dc / out.incident_dc : 0.0;
    return out;
}

SingleBeamView corrected_single_beam(const HarmonicSet& harmonics, const EmitterParams& emitter) {
    const auto& drive = harmonics.drive();
    if (!(drive.rabi1_gamma > 0.0) || !(drive.rabi2_gamma > 0.0))
        throw IllConditioned("per-beam view needs both beams present");

    const Cplx scatter_coupling = kI * emitter.eta * std::exp(-kI * emitter.psi_rad);
    const Cplx t1 = 1.0 + scatter_coupling * harmonics.coh(0) / drive.rabi1_gamma;
    const Cplx t2 = 1.0 + scatter_coupling * harmonics.coh(-1) / drive.rabi2_gamma;
    return {t1, t2, std::arg(t1), std::arg(t2), 1.0 - std::norm(t1), 1.0 - std::norm(t2)};
}

HyperRamanFeature hyper_raman_scan(const EmitterParams& emitter,
                                   const BichromaticDrive& drive_template, double scan_min_gamma,
                                   double scan_max_gamma, int points, double prominence_frac) {
    if (points < 5) throw OutOfRange("points", "need at least 5 scan points");
    if (!(scan_max_gamma > scan_min_gamma)) throw OutOfRange("scan range", "must be increasing");

    HyperRamanFeature out;
    out.scan.reserve(static_cast<std::size_t>(points));
    const double step = (scan_max_gamma - scan_min_gamma) / (points - 1);
    for (int i = 0; i < points; ++i) {
        BichromaticDrive d = drive_template;
        d.detuning1_gamma = scan_min_gamma + step * i;
        const HarmonicSet h = solve_adaptive(emitter, d);
        out.scan.push_back({d.detuning1_gamma, std::abs(h.coh(-1))});
    }

    // Most prominent strict interior local maximum.
    int best = -1;
    double best_prominence = 0.0;
    const auto& s = out.scan;
    for (int i = 1; i + 1 < points; ++i) {
        if (!(s[i].coh_m1_abs > s[i - 1].coh_m1_abs && s[i].coh_m1_abs > s[i + 1].coh_m1_abs))
            continue;
        double left = s[i].coh_m1_abs;
        for (int j = i - 1; j >= 0 && s[j].coh_m1_abs < left; --j) left = s[j].coh_m1_abs;
        double right = s[i].coh_m1_abs;
        for (int j = i + 1; j < points && s[j].coh_m1_abs < right; ++j) right = s[j].coh_m1_abs;
        const double prominence = s[i].coh_m1_abs - std::max(left, right);
        if (prominence > best_prominence) {
            best_prominence = prominence;
            best = i;
        }
    }
    if (best < 0 || best_prominence < prominence_frac * s[best].coh_m1_abs)
        throw NotFound("no auxiliary resonance above the prominence threshold");

    // Parabolic refinement on the three points around the maximum.
    const double ym = s[best - 1].coh_m1_abs, y0 = s[best].coh_m1_abs,
                 yp = s[best + 1].coh_m1_abs;
    const double denom = ym - 2.0 * y0 + yp;
    const double offset = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    out.position_gamma = s[best].detuning1_gamma + offset * step;
    out.peak_value = y0;
    out.ac_stark_shift_gamma = out.position_gamma - drive_template.delta_split_gamma;
    return out;
}

}  // namespace molphase::floquet
