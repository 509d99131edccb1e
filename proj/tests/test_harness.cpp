#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"
#include "slowlight/harness.hpp"

using namespace slowlight;

TEST_CASE("background depth follows from the absorbed fraction") {
    CHECK(background_depth_from_absorption(0.90) == Catch::Approx(2.303).margin(1e-3));
    CHECK(background_depth_from_absorption(0.0) == 0.0);
    CHECK_THROWS_AS(background_depth_from_absorption(1.0), config_error);
}

TEST_CASE("default model is already calibrated to the anchor width") {
    RunConfig cfg;
    const auto dip = dip_spectrum(cfg.medium, cfg.spectrum, 4);
    const auto fit = fit_eit_peak(dip);
    CHECK(fit.fwhm == Catch::Approx(62e3).epsilon(0.01));
    CHECK(fit.amplitude > 0.0);
    CHECK(std::abs(fit.center) < 2e3);
}

TEST_CASE("coupling-off absorption is the background depth at line center") {
    RunConfig cfg;
    const auto dip = dip_spectrum(cfg.medium, cfg.spectrum, 4);
    const std::size_t mid = dip.detunings.size() / 2;
    CHECK(dip.absorption_off[mid] ==
          Catch::Approx(cfg.medium.background_optical_depth).margin(1e-9));
    // absorption falls off toward the wings of the anti-hole
    CHECK(dip.absorption_off.front() < 0.5 * dip.absorption_off[mid]);
    CHECK(dip.absorption_off.back() < 0.5 * dip.absorption_off[mid]);
}

TEST_CASE("calibration hits the width target and reports transparency") {
    RunConfig cfg;
    cfg.medium.fields.rabi_calibration = 5e4;  // start away from the answer
    const auto r = calibrate(cfg.calibration, cfg, 4);
    CHECK(r.background_optical_depth == Catch::Approx(2.3026).margin(1e-3));
    CHECK(std::abs(r.fwhm_residual) <= 0.01);
    CHECK(r.rabi_calibration > 0.0);
    CHECK(r.achieved_transparency > 0.0);
    CHECK(r.achieved_transparency < 1.0);
    // the frozen default came from this very procedure
    CHECK(r.rabi_calibration ==
          Catch::Approx(MediumModel{}.fields.rabi_calibration).epsilon(1e-3));
}

TEST_CASE("delay measurement matches the transfer-phase derivative") {
    RunConfig cfg;
    const auto m = run_delay_measurement(cfg, 4);
    CHECK(m.points.size() == 4);
    CHECK(m.fit.r_squared > 0.99);
    const double derived = reference_group_delay(cfg.medium);
    CHECK(m.delay == Catch::Approx(derived).epsilon(0.05));
    // phases grow with modulation frequency for a real delay
    CHECK(m.points.back().phase_shift > m.points.front().phase_shift);
}

TEST_CASE("harmonic delays agree when both lie inside the window") {
    RunConfig cfg;
    const auto d = harmonic_delays(cfg, 3e3, 4);
    CHECK(d.fundamental > 0.0);
    CHECK(std::abs(d.third / d.fundamental - 1.0) < 0.10);
}

TEST_CASE("intensity scan rows are ordered and self-consistent") {
    RunConfig cfg;
    cfg.intensity_scan.steps = 5;
    const auto table = run_intensity_scan(cfg, 4);
    REQUIRE(table.rows.size() == 5);
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        CHECK(table.rows[i].intensity > table.rows[i - 1].intensity);
    for (const auto& r : table.rows) {
        CHECK(std::abs(r.group_velocity * r.group_delay / cfg.medium.length - 1.0) <
              1e-9);
        CHECK(r.eit_fwhm > 0.0);
        CHECK(r.eit_amplitude > 0.0);
    }
    // more coupling power widens the window
    CHECK(table.rows.back().eit_fwhm > table.rows.front().eit_fwhm);
}

TEST_CASE("scan table serializes with metadata, header, and full precision") {
    RunConfig cfg;
    cfg.intensity_scan.steps = 3;
    const auto table = run_intensity_scan(cfg, 4);
    const auto csv = scan_table_to_csv(table, cfg);
    CHECK(csv.columns.size() == 5);
    CHECK(csv.rows.size() == 3);
    const std::string text = render_csv(csv);
    CHECK(text.find("# config_hash: ") != std::string::npos);
    CHECK(text.find("intensity_w_cm2,eit_amplitude,eit_fwhm_hz,group_delay_s,"
                    "group_velocity_m_s") != std::string::npos);
    // identical inputs give identical bytes
    CHECK(text == render_csv(scan_table_to_csv(run_intensity_scan(cfg, 2), cfg)));
}

TEST_CASE("narrow grids and spans are rejected up front") {
    RunConfig cfg;
    cfg.spectrum.half_span = 100e3;  // less than 10x the window estimate
    CHECK_THROWS_AS(dip_spectrum(cfg.medium, cfg.spectrum, 1), config_error);
    RunConfig cfg2;
    cfg2.spectrum.points = 65;  // too coarse inside the window
    CHECK_THROWS_AS(dip_spectrum(cfg2.medium, cfg2.spectrum, 1), numerical_error);
}
