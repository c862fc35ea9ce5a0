#pragma once

#include <complex>
#include <vector>

#include "molphase/params.hpp"

namespace molphase::bloch {

// Two-level density matrix in the (inversion, coherence) parametrization.
// Trace is preserved by construction; purity w^2 + 4|coh|^2 <= 1 for any
// physical state.
struct BlochState {
    double w = 1.0;                    // population inversion rho_gg - rho_ee
    std::complex<double> coh{0.0, 0.0};  // coherence rho_eg

    double excited_population() const { return 0.5 * (1.0 - w); }
    double purity() const { return w * w + 4.0 * std::norm(coh); }
};

// Equations of motion in Gamma-normalized units (time in tau, detuning and
// Rabi frequency in Gamma):
//   d(coh)/dt = (i Delta - 1/2) coh + i (Omega/2) w
//   d(w)/dt   = (1 - w) - 2 Omega Im(coh)
// The signs are pinned by requiring the steady state to reproduce the
// closed-form transmission exactly (see steady_state / transient_transmission).
BlochState obe_derivative(const BlochState& state, double delta_gamma, double rabi_gamma);

// Largest step the fixed-step RK4 integrator accepts for these rates.
double max_stable_dt(double delta_gamma, double rabi_gamma);

// One classic fourth-order Runge-Kutta step.  Throws StepTooLarge when dt
// exceeds max_stable_dt.
BlochState obe_step(const BlochState& state, double delta_gamma, double rabi_gamma,
                    double dt_tau);

// Closed-form steady state of the driven, damped two-level system.
BlochState steady_state(double delta_gamma, double rabi_gamma);

// Instantaneous transmission t = 1 + i eta e^{-i psi} (Gamma/Omega) coh;
// at the steady state this reproduces the closed-form single-beam result.
ComplexTransmission transient_transmission(const BlochState& state, const EmitterParams& emitter,
                                           double rabi_gamma);

// Piecewise-constant detuning program with optional linear rise per edge.
struct ScheduleSegment {
    double start_tau;
    double detuning_gamma;
};

struct DetuningSchedule {
    std::vector<ScheduleSegment> segments;
    double rise_time_tau = 0.0;

    void validate(double t_end_tau) const;  // throws ScheduleInvalid
    double detuning_at(double t_tau) const;
    double max_abs_detuning() const;
};

struct TrajectoryPoint {
    double time_tau;
    BlochState state;
    double phase_rad;
    double detuning_gamma;
};

// Integrates the switching transient and samples it on a uniform output grid.
// The initial condition is the steady state of the first segment.
std::vector<TrajectoryPoint> simulate_switch(const EmitterParams& emitter, double rabi_gamma,
                                             const DetuningSchedule& schedule, double dt_tau,
                                             double t_end_tau, std::size_t output_points = 1000);

// Linear Stark model: Delta = (offset + coefficient * V) / Gamma.
double stark_to_detuning(double voltage_v, double coefficient_mhz_per_v, double offset_mhz,
                         double gamma_mhz);

}  // namespace molphase::bloch
