#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "slowlight/fit.hpp"
#include "slowlight/lockin.hpp"
#include "slowlight/timeseries.hpp"

using namespace slowlight;

namespace {

TimeSeries cosine(double fs, double f, double phi, double amp = 1.0,
                  std::size_t n = 1 << 16) {
    TimeSeries ts;
    ts.sample_rate = fs;
    ts.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        ts.samples[i] = amp * std::cos(two_pi * f * static_cast<double>(i) / fs + phi);
    return ts;
}

TimeSeries shifted_square(double fs, double f, double tau, std::size_t n = 1 << 16) {
    TimeSeries ts;
    ts.sample_rate = fs;
    ts.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs - tau;
        const double frac = f * t - std::floor(f * t);
        ts.samples[i] = frac < 0.5 ? 1.0 : 0.0;
    }
    return ts;
}

}  // namespace

TEST_CASE("lock-in recovers amplitude and phase of a cosine") {
    const double fs = 1e6, f = 5e3;
    const auto r0 = lockin_demodulate(cosine(fs, f, 0.0), f, 0.0, 10.0 / f);
    CHECK(r0.in_phase == Catch::Approx(0.5).epsilon(0.005));
    CHECK(std::abs(r0.quadrature) < 1e-3);
    CHECK(r0.magnitude == Catch::Approx(0.5).epsilon(0.005));

    const auto r1 = lockin_demodulate(cosine(fs, f, pi / 3), f, 0.0, 10.0 / f);
    CHECK(std::abs(wrap_phase(r1.phase - pi / 3)) < 1e-3);

    const auto r2 = lockin_demodulate(cosine(fs, f, -1.1, 0.37), f, 0.0, 10.0 / f);
    CHECK(r2.magnitude == Catch::Approx(0.5 * 0.37).epsilon(0.005));
    CHECK(std::abs(wrap_phase(r2.phase + 1.1)) < 1e-3);
}

TEST_CASE("magnitude and phase satisfy their defining identities") {
    const double fs = 1e6, f = 4e3;
    const auto r = lockin_demodulate(cosine(fs, f, 0.8), f, 0.2, 10.0 / f);
    CHECK(r.magnitude ==
          Catch::Approx(std::hypot(r.in_phase, r.quadrature)).margin(1e-12));
    CHECK(r.phase == Catch::Approx(std::atan2(r.quadrature, r.in_phase)).margin(1e-15));
}

TEST_CASE("a delayed square wave reports phase 2 pi f tau at the fundamental") {
    const double fs = 1e6, f = 3e3, tau = 30e-6;
    const auto a = lockin_demodulate(shifted_square(fs, f, 0.0), f, 0.0, 10.0 / f);
    const auto b = lockin_demodulate(shifted_square(fs, f, tau), f, 0.0, 10.0 / f);
    const double shift = wrap_phase(a.phase - b.phase);
    CHECK(shift == Catch::Approx(two_pi * f * tau).epsilon(0.02));
}

TEST_CASE("phase additivity: shifting the signal shifts the reported phase") {
    const double fs = 1e6, f = 5e3;
    const double base = lockin_demodulate(cosine(fs, f, 0.4), f, 0.0, 10.0 / f).phase;
    for (double dphi : {0.3, -0.9, 1.7}) {
        const double p = lockin_demodulate(cosine(fs, f, 0.4 + dphi), f, 0.0, 10.0 / f).phase;
        CHECK(std::abs(wrap_phase(p - base - dphi)) < 1e-3);
    }
}

TEST_CASE("reference-phase covariance rotates the output vector") {
    const double fs = 1e6, f = 5e3;
    const auto r0 = lockin_demodulate(cosine(fs, f, 0.7), f, 0.0, 10.0 / f);
    const double theta = 0.6;
    const auto r1 = lockin_demodulate(cosine(fs, f, 0.7), f, theta, 10.0 / f);
    const double expect_i = r0.in_phase * std::cos(theta) + r0.quadrature * std::sin(theta);
    const double expect_q = -r0.in_phase * std::sin(theta) + r0.quadrature * std::cos(theta);
    CHECK(r1.in_phase == Catch::Approx(expect_i).margin(1e-9));
    CHECK(r1.quadrature == Catch::Approx(expect_q).margin(1e-9));
    CHECK(r1.magnitude == Catch::Approx(r0.magnitude).margin(1e-9));
}

TEST_CASE("unsettled filters are rejected") {
    const double fs = 1e6, f = 5e3;
    auto short_sig = cosine(fs, f, 0.0, 1.0, 1 << 10);  // ~1 ms
    CHECK_THROWS_AS(lockin_demodulate(short_sig, f, 0.0, 10.0 / f), numerical_error);
}

TEST_CASE("suppression phases separate background and peak components") {
    // synthetic spectrum: constant background vector plus a Lorentzian peak
    // vector at a different phase
    std::vector<std::pair<double, LockInResult>> spectra;
    const double phase_bg = 0.4, phase_pk = 1.3;
    for (int i = -20; i <= 20; ++i) {
        const double d = i * 5e3;
        const double pk = 0.8 / (1.0 + std::pow(d / 12e3, 2));
        const double x = 0.5 * std::cos(phase_bg) + pk * std::cos(phase_pk);
        const double y = 0.5 * std::sin(phase_bg) + pk * std::sin(phase_pk);
        LockInResult r;
        r.in_phase = x;
        r.quadrature = y;
        r.magnitude = std::hypot(x, y);
        r.phase = std::atan2(y, x);
        spectra.push_back({d, r});
    }
    const auto sup_bg = suppress_component(spectra, SpectrumComponent::Background);
    const auto sup_pk = suppress_component(spectra, SpectrumComponent::Peak);
    CHECK_FALSE(sup_bg.degenerate);
    CHECK(std::abs(wrap_phase(sup_bg.component_phase - phase_bg)) < 0.05);
    CHECK(std::abs(wrap_phase(sup_pk.component_phase - phase_pk)) < 0.05);

    // projecting at the background-suppressing phase kills the edge points
    const auto proj = phase_resolved_spectrum(spectra, sup_bg.phase_ref);
    CHECK(std::abs(proj.front().projection) <
          0.05 * spectra.front().second.magnitude);

    // coincident phases raise the degeneracy flag
    std::vector<std::pair<double, LockInResult>> flat;
    for (int i = -5; i <= 5; ++i) {
        LockInResult r;
        r.in_phase = 1.0 + 0.3 / (1.0 + i * i);
        r.quadrature = 0.0;
        r.magnitude = r.in_phase;
        r.phase = 0.0;
        flat.push_back({i * 1e3, r});
    }
    CHECK(suppress_component(flat, SpectrumComponent::Peak).degenerate);
}

TEST_CASE("Lorentzian fit round-trips noiseless synthetic data") {
    const double base = 0.2, amp = 1.4, center = -3e3, fwhm = 62e3;
    std::vector<double> x, y;
    for (int i = -150; i <= 150; ++i) {
        const double d = i * 2e3;
        const double u = (d - center) / (0.5 * fwhm);
        x.push_back(d);
        y.push_back(base + amp / (1.0 + u * u));
    }
    const auto f = fit_lorentzian(x, y);
    CHECK(f.fwhm == Catch::Approx(fwhm).epsilon(1e-3));
    CHECK(f.amplitude == Catch::Approx(amp).epsilon(1e-6));
    CHECK(f.baseline == Catch::Approx(base).margin(1e-6));
    CHECK(f.center == Catch::Approx(center).margin(1.0));
    CHECK(f.rms_residual < 1e-10);
}

TEST_CASE("Lorentzian width survives 1% noise across 100 seeds") {
    const double base = 0.0, amp = 1.0, center = 0.0, fwhm = 62e3;
    std::vector<double> x;
    for (int i = -150; i <= 150; ++i) x.push_back(i * 2e3);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01 * amp);
        std::vector<double> y;
        for (double d : x) {
            const double u = (d - center) / (0.5 * fwhm);
            y.push_back(base + amp / (1.0 + u * u) + noise(rng));
        }
        const auto f = fit_lorentzian(x, y);
        CHECK(std::abs(f.fwhm / fwhm - 1.0) < 0.02);
    }
}

TEST_CASE("linear fit recovers an exact phase-frequency line") {
    const double tau = 39.6e-6;
    std::vector<double> f = {3e3, 4e3, 5e3, 6e3};
    std::vector<double> p;
    for (double x : f) p.push_back(two_pi * x * tau);
    const auto fit = fit_linear(f, p);
    CHECK(fit.slope / two_pi == Catch::Approx(tau).epsilon(1e-12));
    CHECK(std::abs(fit.intercept) < 1e-12);
    CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("constant phase gives zero delay; degenerate inputs throw") {
    const auto fit = fit_linear({3e3, 4e3, 5e3}, {0.25, 0.25, 0.25});
    CHECK(fit.slope == Catch::Approx(0.0).margin(1e-18));
    CHECK_THROWS_AS(fit_linear({1.0, 2.0}, {1.0, 2.0}), config_error);
    CHECK_THROWS_AS(fit_linear({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), numerical_error);
}
