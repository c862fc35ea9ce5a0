#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "molphase/params.hpp"
#include "molphase/rng.hpp"
#include "molphase/steadystate.hpp"

using namespace molphase;
using namespace molphase::steadystate;

namespace {

EmitterParams reference_emitter(double eta = 0.1, double psi = 0.0) {
    EmitterParams emitter;
    emitter.gamma_mhz = 21.0;
    emitter.eta = eta;
    emitter.psi_rad = psi;
    return emitter;
}

DriveField drive_at(const EmitterParams& emitter, double delta_gamma, double saturation) {
    return DriveField::from_saturation(delta_gamma * emitter.gamma_mhz, saturation,
                                       emitter.gamma_mhz);
}

}  // namespace

TEST_CASE("on-resonance weak-field transmission") {
    const auto emitter = reference_emitter();
    const auto result = transmission(emitter, drive_at(emitter, 0.0, 0.0));
    CHECK(result.t.real() == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(result.t.imag() == doctest::Approx(0.0));
    CHECK(result.phase_rad == doctest::Approx(0.0));
    CHECK(result.extinction == doctest::Approx(0.19).epsilon(1e-14));
}

TEST_CASE("half-linewidth detuning gives the (1+i)/2 lineshape factor") {
    const auto emitter = reference_emitter();
    const auto result = transmission(emitter, drive_at(emitter, 0.5, 0.0));
    CHECK(result.t.real() == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(result.t.imag() == doctest::Approx(-0.05).epsilon(1e-12));
    CHECK(result.phase_deg() == doctest::Approx(-3.0128).epsilon(1e-4));
    CHECK(result.extinction == doctest::Approx(0.095).epsilon(1e-12));
}

TEST_CASE("a decoupled emitter is transparent") {
    const auto emitter = reference_emitter(0.0);
    for (double delta : {-3.0, 0.0, 7.5}) {
        const auto result = transmission(emitter, drive_at(emitter, delta, 2.0));
        CHECK(result.t == std::complex<double>(1.0, 0.0));
        CHECK(result.extinction == doctest::Approx(0.0));
    }
}

TEST_CASE("weak-field extrema match the closed forms and the numeric maximum") {
    SUBCASE("eta = 0.1") {
        const auto [pos, neg] = weak_field_extrema(0.1);
        CHECK(deg_from_rad(std::abs(pos.phi_rad)) == doctest::Approx(3.017).epsilon(2e-4));
        CHECK(pos.delta_gamma == doctest::Approx(0.4743).epsilon(2e-4));
        CHECK(neg.phi_rad == doctest::Approx(-pos.phi_rad));
        CHECK(neg.delta_gamma == doctest::Approx(-pos.delta_gamma));

        // Independent route: numeric maximization of |arg t| at S = 1e-6.
        double argmax = 0.0;
        const double numeric = max_abs_phase(0.1, 0.0, 1e-6, &argmax);
        CHECK(deg_from_rad(numeric) ==
              doctest::Approx(deg_from_rad(std::abs(pos.phi_rad))).epsilon(1e-3 / 3.0));
        CHECK(argmax == doctest::Approx(pos.delta_gamma).epsilon(1e-3));
    }
    SUBCASE("perfect coupling pins the extremum to resonance at 90 degrees") {
        const auto [pos, neg] = weak_field_extrema(1.0);
        CHECK(std::abs(pos.phi_rad) == doctest::Approx(kPi / 2));
        CHECK(pos.delta_gamma == doctest::Approx(0.0));
        CHECK(neg.phi_rad == doctest::Approx(kPi / 2));
    }
    SUBCASE("no coupling, no phase") {
        const auto [pos, neg] = weak_field_extrema(0.0);
        CHECK(pos.phi_rad == doctest::Approx(0.0));
        CHECK(neg.phi_rad == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(weak_field_extrema(1.5), OutOfRange);
}

TEST_CASE("extrema consistency over random coupling efficiencies") {
    Xoshiro256ss rng(20211);
    for (int i = 0; i < 100; ++i) {
        const double eta = 0.005 + 0.99 * rng.uniform();
        double argmax = 0.0;
        const double numeric = max_abs_phase(eta, 0.0, 1e-6, &argmax);
        const double closed = std::asin(eta / (2.0 - eta));
        CHECK(std::abs(numeric - closed) < 1e-4);
        CHECK(std::abs(argmax - 0.5 * std::sqrt(1.0 - eta)) < 1e-3);
    }
}

TEST_CASE("extinction spectrum width power-broadens as sqrt(1+S)") {
    const auto emitter = reference_emitter();
    CHECK(extinction_fwhm(emitter, 0.0) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(extinction_fwhm(emitter, 3.0) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("spectrum rows equal pointwise transmission and reject bad grids") {
    const auto emitter = reference_emitter();
    const std::vector<double> single{0.0};
    const auto rows = spectrum(emitter, 0.0, single);
    REQUIRE(rows.size() == 1);
    const auto direct = transmission(emitter, drive_at(emitter, 0.0, 0.0));
    CHECK(rows[0].t == direct.t);
    CHECK(rows[0].extinction == doctest::Approx(direct.extinction));

    CHECK_THROWS_AS(spectrum(emitter, 0.0, std::vector<double>{}), EmptyGrid);
    CHECK_THROWS_AS(spectrum(emitter, 0.0, std::vector<double>{0.0, 0.0}), EmptyGrid);
    CHECK_THROWS_AS(spectrum(emitter, 0.0, std::vector<double>{1.0, -1.0}), EmptyGrid);
}

TEST_CASE("two-beam halving rule") {
    CHECK(two_beam_observed_dip(0.36) == doctest::Approx(0.18));
    CHECK(two_beam_observed_dip(0.0) == doctest::Approx(0.0));
    CHECK(two_beam_observed_dip(0.2) == doctest::Approx(0.1));
    CHECK_THROWS_AS(two_beam_observed_dip(-0.1), OutOfRange);
    CHECK_THROWS_AS(two_beam_observed_dip(1.2), OutOfRange);
}

TEST_CASE("saturation behaviour at S = 100") {
    const auto emitter = reference_emitter();
    const std::vector<double> saturations{100.0};
    const auto rows = saturation_asymptotics(emitter, saturations);
    REQUIRE(rows.size() == 1);
    // 1 - (1 - eta/(1+S))^2 evaluated at eta = 0.1, S = 100.
    CHECK(rows[0].on_resonance_extinction == doctest::Approx(1.9792059e-3).epsilon(1e-6));
    CHECK(deg_from_rad(rows[0].max_phase_rad) == doctest::Approx(0.286).epsilon(0.02));
    CHECK(rows[0].argmax_delta_gamma == doctest::Approx(5.0).epsilon(0.05));
    // Strong-field asymptote of the maximum phase.
    CHECK(rows[0].max_phase_rad ==
          doctest::Approx(0.1 / (2.0 * std::sqrt(101.0))).epsilon(0.01));
}

TEST_CASE("weak-field limit of the saturation sweep reproduces the extrema") {
    const auto emitter = reference_emitter();
    const std::vector<double> saturations{1e-8};
    const auto rows = saturation_asymptotics(emitter, saturations);
    const auto [pos, neg] = weak_field_extrema(emitter.eta);
    CHECK(rows[0].max_phase_rad == doctest::Approx(std::abs(pos.phi_rad)).epsilon(1e-6));
    CHECK(rows[0].argmax_delta_gamma == doctest::Approx(pos.delta_gamma).epsilon(1e-4));
    CHECK_THROWS_AS(saturation_asymptotics(emitter, std::vector<double>{-1.0}), OutOfRange);
}

TEST_CASE("phase is odd and extinction even in the detuning for psi = 0") {
    Xoshiro256ss rng(5150);
    for (int i = 0; i < 200; ++i) {
        const double eta = rng.uniform();
        const double delta = -8.0 + 16.0 * rng.uniform();
        const double s = std::pow(10.0, -4.0 + 5.0 * rng.uniform());
        const auto plus = transmission_normalized(eta, 0.0, delta, s);
        const auto minus = transmission_normalized(eta, 0.0, -delta, s);
        CHECK(std::arg(minus) == doctest::Approx(-std::arg(plus)).epsilon(1e-12));
        CHECK(std::norm(minus) == doctest::Approx(std::norm(plus)).epsilon(1e-12));
    }
}

TEST_CASE("dispersive wings fall as 1/delta, absorptive as 1/delta^2") {
    const double eta = 0.1;
    double phase_scaled_min = 1e30, phase_scaled_max = 0.0;
    double ext_scaled_min = 1e30, ext_scaled_max = 0.0;
    for (double delta = 10.0; delta <= 100.0; delta *= 1.25) {
        const auto t = transmission_normalized(eta, 0.0, delta, 0.0);
        const double phase_scaled = std::abs(std::arg(t)) * delta;
        const double ext_scaled = (1.0 - std::norm(t)) * delta * delta;
        phase_scaled_min = std::min(phase_scaled_min, phase_scaled);
        phase_scaled_max = std::max(phase_scaled_max, phase_scaled);
        ext_scaled_min = std::min(ext_scaled_min, ext_scaled);
        ext_scaled_max = std::max(ext_scaled_max, ext_scaled);
    }
    CHECK(phase_scaled_max / phase_scaled_min < 1.02);
    CHECK(ext_scaled_max / ext_scaled_min < 1.02);
}

TEST_CASE("extinction never exceeds unity") {
    Xoshiro256ss rng(31337);
    for (int i = 0; i < 500; ++i) {
        const double eta = rng.uniform();
        const double psi = -kPi + 2.0 * kPi * rng.uniform();
        const double delta = -20.0 + 40.0 * rng.uniform();
        const double s = std::pow(10.0, -6.0 + 8.0 * rng.uniform());
        const auto t = transmission_normalized(eta, psi, delta, s);
        CHECK(1.0 - std::norm(t) <= 1.0);
    }
}

TEST_CASE("a geometric phase skews the extrema between the two signs") {
    // psi != 0 breaks the even/odd symmetry; the maximizer must then search
    // both signs of the detuning.
    double argmax = 0.0;
    const double best = max_abs_phase(0.3, 0.4, 1e-6, &argmax);
    const auto t_pos = transmission_normalized(0.3, 0.4, std::abs(argmax), 1e-6);
    const auto t_neg = transmission_normalized(0.3, 0.4, -std::abs(argmax), 1e-6);
    CHECK(std::abs(std::arg(t_pos)) != doctest::Approx(std::abs(std::arg(t_neg))).epsilon(1e-6));
    CHECK(best >= std::abs(std::arg(t_pos)) - 1e-12);
    CHECK(best >= std::abs(std::arg(t_neg)) - 1e-12);
}
