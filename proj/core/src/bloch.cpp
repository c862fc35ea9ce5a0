#include "molphase/bloch.hpp"

#include <algorithm>
#include <cmath>

namespace molphase::bloch {

namespace {

BlochState axpy(const BlochState& a, double scale, const BlochState& b) {
    return {a.w + scale * b.w, a.coh + scale * b.coh};
}

// RK4 step with the detuning sampled at the stage times, so piecewise
// schedules remain integrable (locally first order across an edge only).
template <typename DeltaFn>
BlochState rk4_step(const BlochState& y, DeltaFn&& delta_at, double t, double rabi, double dt) {
    const BlochState k1 = obe_derivative(y, delta_at(t), rabi);
    const BlochState k2 = obe_derivative(axpy(y, 0.5 * dt, k1), delta_at(t + 0.5 * dt), rabi);
    const BlochState k3 = obe_derivative(axpy(y, 0.5 * dt, k2), delta_at(t + 0.5 * dt), rabi);
    const BlochState k4 = obe_derivative(axpy(y, dt, k3), delta_at(t + dt), rabi);
    return {y.w + dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
            y.coh + dt / 6.0 * (k1.coh + 2.0 * k2.coh + 2.0 * k3.coh + k4.coh)};
}

}  // namespace

BlochState obe_derivative(const BlochState& state, double delta_gamma, double rabi_gamma) {
    const std::complex<double> dcoh =
        std::complex<double>(-0.5, delta_gamma) * state.coh +
        std::complex<double>(0.0, 0.5 * rabi_gamma) * state.w;
    const double dw = (1.0 - state.w) - 2.0 * rabi_gamma * state.coh.imag();
    return {dw, dcoh};
}

double max_stable_dt(double delta_gamma, double rabi_gamma) {
    double dt = 1.0 / 200.0;
    if (std::abs(delta_gamma) > 0.0) dt = std::min(dt, 0.05 / std::abs(delta_gamma));
    if (rabi_gamma > 0.0) dt = std::min(dt, 0.05 / rabi_gamma);
    return dt;
}

BlochState obe_step(const BlochState& state, double delta_gamma, double rabi_gamma,
                    double dt_tau) {
    if (!(dt_tau > 0.0)) throw OutOfRange("dt", "must be > 0");
    if (dt_tau > max_stable_dt(delta_gamma, rabi_gamma) * (1.0 + 1e-12))
        throw StepTooLarge("dt exceeds the stable step for these rates");
    return rk4_step(state, [&](double) { return delta_gamma; }, 0.0, rabi_gamma, dt_tau);
}

BlochState steady_state(double delta_gamma, double rabi_gamma) {
    const double denom =
        delta_gamma * delta_gamma + 0.25 + 0.5 * rabi_gamma * rabi_gamma;
    const double w = (delta_gamma * delta_gamma + 0.25) / denom;
    const std::complex<double> coh = std::complex<double>(0.0, 0.5 * rabi_gamma) *
                                     std::complex<double>(0.5, delta_gamma) / denom;
    return {w, coh};
}

ComplexTransmission transient_transmission(const BlochState& state, const EmitterParams& emitter,
                                           double rabi_gamma) {
    if (!(rabi_gamma > 0.0)) throw ZeroDrive();
    const std::complex<double> t =
        1.0 + std::complex<double>(0.0, emitter.eta / rabi_gamma) *
                  std::exp(std::complex<double>(0.0, -emitter.psi_rad)) * state.coh;
    return ComplexTransmission::from_t(t);
}

void DetuningSchedule::validate(double t_end_tau) const {
    if (segments.empty()) throw ScheduleInvalid("schedule has no segments");
    if (segments.front().start_tau != 0.0)
        throw ScheduleInvalid("first segment must start at t = 0");
    if (rise_time_tau < 0.0) throw ScheduleInvalid("rise time must be >= 0");
    for (std::size_t i = 1; i < segments.size(); ++i) {
        const double gap = segments[i].start_tau - segments[i - 1].start_tau;
        if (!(gap > 0.0)) throw ScheduleInvalid("segment start times must strictly increase");
        if (rise_time_tau > gap)
            throw ScheduleInvalid("rise time longer than a segment");
    }
    if (segments.back().start_tau >= t_end_tau && segments.size() > 1)
        throw ScheduleInvalid("last segment starts beyond t_end");
}

double DetuningSchedule::detuning_at(double t_tau) const {
    std::size_t idx = 0;
    while (idx + 1 < segments.size() && segments[idx + 1].start_tau <= t_tau) ++idx;
    const double level = segments[idx].detuning_gamma;
    if (idx == 0 || rise_time_tau <= 0.0) return level;
    const double since_edge = t_tau - segments[idx].start_tau;
    if (since_edge >= rise_time_tau) return level;
    const double prev = segments[idx - 1].detuning_gamma;
    return prev + (level - prev) * (since_edge / rise_time_tau);
}

double DetuningSchedule::max_abs_detuning() const {
    double m = 0.0;
    for (const auto& seg : segments) m = std::max(m, std::abs(seg.detuning_gamma));
    return m;
}

std::vector<TrajectoryPoint> simulate_switch(const EmitterParams& emitter, double rabi_gamma,
                                             const DetuningSchedule& schedule, double dt_tau,
                                             double t_end_tau, std::size_t output_points) {
    if (!(t_end_tau > 0.0)) throw OutOfRange("t_end", "must be > 0");
    if (output_points < 2) throw OutOfRange("output_points", "must be >= 2");
    schedule.validate(t_end_tau);
    if (!(rabi_gamma > 0.0)) throw ZeroDrive();

    const double dt_max = max_stable_dt(schedule.max_abs_detuning(), rabi_gamma);
    if (!(dt_tau > 0.0) || dt_tau > dt_max * (1.0 + 1e-12))
        throw StepTooLarge("dt does not resolve the largest detuning in the schedule");

    // Choose the step so that every output sample lies exactly on a step
    // boundary; this keeps the output grid uniform and runs deterministic.
    const std::size_t intervals = output_points - 1;
    const std::size_t per_interval = static_cast<std::size_t>(
        std::ceil(t_end_tau / (dt_tau * static_cast<double>(intervals))));
    const std::size_t n_steps = per_interval * intervals;
    const double dt = t_end_tau / static_cast<double>(n_steps);

    const auto delta_at = [&](double t) { return schedule.detuning_at(t); };

    BlochState state = steady_state(schedule.segments.front().detuning_gamma, rabi_gamma);
    std::vector<TrajectoryPoint> out;
    out.reserve(output_points);
    out.push_back({0.0, state, transient_transmission(state, emitter, rabi_gamma).phase_rad,
                   delta_at(0.0)});

    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * dt;
        state = rk4_step(state, delta_at, t0, rabi_gamma, dt);
        if (step % per_interval == 0) {
            const double t = static_cast<double>(step) * dt;
            out.push_back({t, state,
                           transient_transmission(state, emitter, rabi_gamma).phase_rad,
                           delta_at(t)});
        }
    }
    return out;
}

double stark_to_detuning(double voltage_v, double coefficient_mhz_per_v, double offset_mhz,
                         double gamma_mhz) {
    if (!std::isfinite(coefficient_mhz_per_v))
        throw OutOfRange("coefficient", "must be finite");
    if (!(gamma_mhz > 0.0)) throw OutOfRange("gamma", "must be > 0");
    return (offset_mhz + coefficient_mhz_per_v * voltage_v) / gamma_mhz;
}

}  // namespace molphase::bloch
