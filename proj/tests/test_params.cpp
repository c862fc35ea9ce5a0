#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "molphase/params.hpp"
#include "molphase/rng.hpp"
#include "molphase/steadystate.hpp"

using namespace molphase;

TEST_CASE("validate accepts in-range emitters and names the violated field") {
    EmitterParams emitter;
    emitter.gamma_mhz = 21.0;
    emitter.eta = 0.1;
    emitter.psi_rad = 0.0;
    emitter.tau_ns = 1.0;
    CHECK_NOTHROW(validate(emitter));

    EmitterParams bad_eta = emitter;
    bad_eta.eta = 1.5;
    CHECK_THROWS_WITH_AS(validate(bad_eta), doctest::Contains("eta"), OutOfRange);

    EmitterParams bad_gamma = emitter;
    bad_gamma.gamma_mhz = 0.0;
    CHECK_THROWS_WITH_AS(validate(bad_gamma), doctest::Contains("gamma"), OutOfRange);

    EmitterParams bad_psi = emitter;
    bad_psi.psi_rad = 4.0;
    CHECK_THROWS_AS(validate(bad_psi), OutOfRange);

    EmitterParams bad_tau = emitter;
    bad_tau.tau_ns = -1.0;
    CHECK_THROWS_AS(validate(bad_tau), OutOfRange);
}

TEST_CASE("drive_from_power maps a power axis linearly onto saturation") {
    CHECK(drive_from_power(1.0, 0.01).saturation() == doctest::Approx(0.01));
    CHECK(drive_from_power(100.0, 0.01).saturation() == doctest::Approx(1.0));

    const auto strong = drive_from_power(1e4, 0.01);
    CHECK(strong.saturation() == doctest::Approx(100.0));
    CHECK(strong.rabi_gamma() == doctest::Approx(std::sqrt(50.0)));

    CHECK_THROWS_AS(drive_from_power(-1.0, 0.01), OutOfRange);
    CHECK_THROWS_AS(drive_from_power(1.0, 0.0), OutOfRange);
}

TEST_CASE("drive field round trips saturation <-> rabi to 1e-12") {
    Xoshiro256ss rng(12345);
    for (int i = 0; i < 200; ++i) {
        const double s = std::pow(10.0, -6.0 + 9.0 * rng.uniform());
        const double gamma = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
        const auto drive = DriveField::from_saturation(0.3 * gamma, s, gamma);
        const auto back = DriveField::from_rabi(0.3 * gamma, drive.rabi_mhz(), gamma);
        CHECK(back.saturation() == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("transmission is homogeneous of degree zero in (gamma, detuning, rabi)") {
    Xoshiro256ss rng(777);
    EmitterParams emitter;
    emitter.eta = 0.37;
    emitter.psi_rad = 0.2;
    for (int i = 0; i < 100; ++i) {
        const double k = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double delta = -4.0 + 8.0 * rng.uniform();
        const double rabi = 2.0 * rng.uniform();

        EmitterParams scaled = emitter;
        scaled.gamma_mhz = emitter.gamma_mhz * k;
        const auto base = steadystate::transmission(
            emitter, DriveField::from_rabi(delta * emitter.gamma_mhz,
                                           rabi * emitter.gamma_mhz, emitter.gamma_mhz));
        const auto rescaled = steadystate::transmission(
            scaled, DriveField::from_rabi(delta * scaled.gamma_mhz, rabi * scaled.gamma_mhz,
                                          scaled.gamma_mhz));
        CHECK(rescaled.t.real() == doctest::Approx(base.t.real()).epsilon(1e-12));
        CHECK(rescaled.t.imag() == doctest::Approx(base.t.imag()).epsilon(1e-12));
    }
}

TEST_CASE("linewidth/lifetime conversion is a single consistent convention") {
    const double tau = tau_ns_from_gamma_mhz(21.0);
    CHECK(tau == doctest::Approx(1e3 / (2.0 * kPi * 21.0)));
    CHECK(gamma_mhz_from_tau_ns(tau) == doctest::Approx(21.0).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_mhz_from_tau_ns(0.0), OutOfRange);
}

TEST_CASE("complex transmission carries exact derived observables") {
    const std::complex<double> t{0.95, -0.05};
    const auto ct = ComplexTransmission::from_t(t);
    CHECK(ct.phase_rad == std::arg(t));
    CHECK(ct.extinction == 1.0 - std::norm(t));
    CHECK(ct.phase_deg() == doctest::Approx(deg_from_rad(std::arg(t))));
}
