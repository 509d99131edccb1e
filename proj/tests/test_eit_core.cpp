#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "slowlight/medium.hpp"
#include "slowlight/quadrature.hpp"
#include "slowlight/spectrum.hpp"
#include "slowlight/steady_state.hpp"
#include "slowlight/susceptibility.hpp"

using namespace slowlight;

namespace {

MediumModel stock() { return MediumModel{}; }

MediumModel no_coupling() {
    MediumModel m;
    m.fields.coupling_intensity = 0.0;
    return m;
}

}  // namespace

TEST_CASE("resonant susceptibility without coupling is purely absorptive") {
    const MediumModel m = no_coupling();
    const complexd c = chi_homogeneous(0.0, 0.0, m);
    CHECK(std::abs(c - complexd(0.0, 1.0)) < 1e-14);
    // without coupling the two-photon detuning cancels out entirely
    const complexd c2 = chi_homogeneous(37e3, 0.0, m);
    CHECK(std::abs(c2 - complexd(0.0, 1.0)) < 1e-14);
}

TEST_CASE("optical half width at half maximum") {
    // at optical detuning gamma_opt/2pi the denominator picks up (1 - i):
    // chi = i/(1 - i) = (-1 + i)/2
    const MediumModel m = no_coupling();
    const double hwhm_hz = m.atomic.optical_dephasing_rate / two_pi;
    const complexd c = chi_homogeneous(0.0, hwhm_hz, m);
    CHECK(c.imag() == Catch::Approx(0.5).margin(1e-12));
    CHECK(c.real() == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("dark state: zero spin dephasing gives perfect transparency") {
    MediumModel m = stock();
    m.atomic.spin_dephasing_rate = 0.0;
    const complexd c = chi_homogeneous(0.0, 0.0, m);
    CHECK(std::abs(c) < 1e-14);
}

TEST_CASE("Autler-Townes doublet sits near +-Omega/2 in angular frequency") {
    MediumModel m = stock();
    m.atomic.spin_dephasing_rate = two_pi * 10.0;  // sharpen the doublet
    const double omega = rabi_from_intensity(m.fields.coupling_intensity,
                                             m.fields.rabi_calibration);
    // scanning the probe moves both detunings together; absorption maxima
    // sit at +-Omega/2 in angular frequency, i.e. Omega/(4 pi) in Hz
    const double split_hz = omega / (2.0 * two_pi);
    double best_d = 0.0, best_v = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double d = 0.2 * split_hz + 1.6 * split_hz * i / 400.0;
        const double v = chi_homogeneous(d, d, m).imag();
        if (v > best_v) { best_v = v; best_d = d; }
    }
    CHECK(best_d == Catch::Approx(split_hz).epsilon(0.05));
}

TEST_CASE("closed form equals the steady-state oracle on a 21x21 grid") {
    MediumModel m = stock();
    double worst = 0.0;
    for (int i = 0; i < 21; ++i) {
        for (int j = 0; j < 21; ++j) {
            const double delta = -150e3 + 300e3 * i / 20.0;
            const double opt = -400e3 + 800e3 * j / 20.0;
            const complexd a = chi_homogeneous(delta, opt, m);
            const complexd b = steady_state_oracle(delta, opt, m);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-30));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("averaged susceptibility is anchored to i at line center") {
    MediumModel m = no_coupling();
    const AveragedSusceptibility chi(m);
    CHECK(std::abs(chi(0.0) - complexd(0.0, 1.0)) < 1e-12);
}

TEST_CASE("averaging reduces to the homogeneous value for vanishing widths") {
    MediumModel m = stock();
    m.broadening.optical_inhom_fwhm = 1e-3;
    m.broadening.spin_inhom_fwhm = 1e-3;
    const AveragedSusceptibility chi(m);
    // the anchor is the no-coupling center value, which collapses to exactly
    // i here, so the averaged result must match the bare homogeneous form
    for (double d : {0.0, 11e3, 47e3, 130e3}) {
        const complexd direct = chi_homogeneous(d, d, m);
        CHECK(std::abs(chi(d) - direct) < 1e-6);
    }
}

TEST_CASE("Im chi is even and Re chi is odd in the two-photon detuning") {
    const MediumModel m = stock();
    const AveragedSusceptibility chi(m);
    for (double d : {500.0, 7e3, 31e3, 62e3, 210e3}) {
        const complexd p = chi(d), q = chi(-d);
        CHECK(std::abs(p.imag() - q.imag()) < 1e-9);
        CHECK(std::abs(p.real() + q.real()) < 1e-9);
    }
}

TEST_CASE("doubling the quadrature order leaves the average unchanged") {
    MediumModel m = stock();
    MediumModel fine = m;
    fine.broadening.quadrature_points_optical = 128;
    fine.broadening.quadrature_points_spin = 128;
    const AveragedSusceptibility a(m), b(fine);
    for (double d : {0.0, 500.0, 5e3, 31e3, 62e3, 200e3}) {
        const double rel = std::abs(a(d) - b(d)) / std::abs(b(d));
        CHECK(rel < 5e-4);
    }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    const auto rule = gauss_legendre(8);
    double s0 = 0.0, s2 = 0.0, s14 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        s0 += rule.weights[i];
        s2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
        s14 += rule.weights[i] * std::pow(rule.nodes[i], 14);
    }
    CHECK(s0 == Catch::Approx(2.0).margin(1e-13));
    CHECK(s2 == Catch::Approx(2.0 / 3.0).margin(1e-13));
    CHECK(s14 == Catch::Approx(2.0 / 15.0).margin(1e-12));
}

TEST_CASE("line-shape densities have the documented peak values") {
    // Lorentzian peak 2/(pi fwhm); Gaussian peak 2 sqrt(ln2/pi)/fwhm
    const double fw = 60e3;
    CHECK(lineshape_pdf(0.0, fw, LineShape::Lorentzian) ==
          Catch::Approx(2.0 / (pi * fw)).epsilon(1e-12));
    CHECK(lineshape_pdf(0.0, fw, LineShape::Gaussian) ==
          Catch::Approx(2.0 * std::sqrt(std::log(2.0) / pi) / fw).epsilon(1e-12));
}

TEST_CASE("Rabi frequency scales with the square root of intensity") {
    CHECK(rabi_from_intensity(4.0, 100.0) == Catch::Approx(200.0));
    CHECK(rabi_from_intensity(0.0, 100.0) == 0.0);
    CHECK_THROWS_AS(rabi_from_intensity(-1.0, 100.0), config_error);
    CHECK_THROWS_AS(rabi_from_intensity(1.0, 0.0), config_error);
}

TEST_CASE("width estimate reduces to a sum for Lorentzian spin broadening") {
    MediumModel m = no_coupling();
    m.broadening.spin_inhom_shape = LineShape::Lorentzian;
    const double expect = m.atomic.spin_dephasing_rate / pi + m.broadening.spin_inhom_fwhm;
    CHECK(eit_width_estimate(m) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("model validation reports the offending field") {
    MediumModel m = stock();
    m.length = -1.0;
    CHECK_THROWS_WITH(m.validate(), Catch::Matchers::ContainsSubstring("medium.length"));
    MediumModel m2 = stock();
    m2.broadening.quadrature_points_spin = 7;
    CHECK_THROWS_AS(m2.validate(), config_error);
}
