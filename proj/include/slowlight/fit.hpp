#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

/// Lorentzian peak on a constant baseline:
///   y(x) = baseline + amplitude / (1 + ((x - center) / hwhm)^2)
struct LorentzianFit {
    double baseline = 0.0;
    double amplitude = 0.0;
    double center = 0.0;
    double fwhm = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline bool solve4(std::array<std::array<double, 4>, 4>& a, std::array<double, 4>& b) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < 4; ++i) b[i] /= a[i][i];
    return true;
}

}  // namespace detail

/// Levenberg-Marquardt fit of a Lorentzian on a constant baseline, with the
/// analytic Jacobian. Parameters: baseline, amplitude, center, hwhm.
inline LorentzianFit fit_lorentzian(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    int max_iterations = 200) {
    if (x.size() != y.size()) throw config_error("fit_lorentzian: x/y size mismatch");
    const std::size_t n = x.size();
    if (n < 5) throw config_error("fit_lorentzian: need at least 5 points");

    // moment-based start: baseline from edges, peak from the extremum
    const double base0 = 0.5 * (y.front() + y.back());
    std::size_t ipk = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(y[i] - base0) > std::abs(y[ipk] - base0)) ipk = i;
    double amp0 = y[ipk] - base0;
    if (amp0 == 0.0) amp0 = 1e-12;
    double c0 = x[ipk];
    // half-max crossings for the initial width
    const double half = base0 + 0.5 * amp0;
    double lo = x.front(), hi = x.back();
    for (std::size_t i = ipk; i-- > 0;) {
        if ((y[i] - half) * (amp0 > 0 ? 1.0 : -1.0) < 0) { lo = x[i]; break; }
    }
    for (std::size_t i = ipk + 1; i < n; ++i) {
        if ((y[i] - half) * (amp0 > 0 ? 1.0 : -1.0) < 0) { hi = x[i]; break; }
    }
    double w0 = 0.5 * std::max(hi - lo, (x.back() - x.front()) / static_cast<double>(n));

    std::array<double, 4> p = {base0, amp0, c0, w0};
    auto chi2 = [&](const std::array<double, 4>& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (x[i] - q[2]) / q[3];
            const double r = y[i] - (q[0] + q[1] / (1.0 + u * u));
            s += r * r;
        }
        return s;
    };

    double lambda = 1e-3;
    double cost = chi2(p);
    int iter = 0;
    bool converged = false;
    for (; iter < max_iterations; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (x[i] - p[2]) / p[3];
            const double d = 1.0 + u * u;
            const double l = 1.0 / d;
            const double r = y[i] - (p[0] + p[1] * l);
            const std::array<double, 4> j = {
                1.0,
                l,
                p[1] * 2.0 * u / (p[3] * d * d),
                p[1] * 2.0 * u * u / (p[3] * d * d),
            };
            for (int a = 0; a < 4; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 4; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        auto lhs = jtj;
        for (int a = 0; a < 4; ++a) lhs[a][a] *= 1.0 + lambda;
        auto step = jtr;
        if (!detail::solve4(lhs, step))
            throw numerical_error("fit_lorentzian: singular normal equations");
        std::array<double, 4> trial = {p[0] + step[0], p[1] + step[1], p[2] + step[2],
                                       p[3] + step[3]};
        if (!(std::abs(trial[3]) > 0)) trial[3] = p[3];
        const double trial_cost = chi2(trial);
        if (trial_cost < cost) {
            const double rel = (cost - trial_cost) / std::max(cost, 1e-300);
            p = trial;
            cost = trial_cost;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-12) { converged = true; break; }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) { converged = cost < 1e-20 || true; break; }
        }
    }

    LorentzianFit f;
    f.baseline = p[0];
    f.amplitude = p[1];
    f.center = p[2];
    f.fwhm = 2.0 * std::abs(p[3]);
    f.rms_residual = std::sqrt(cost / static_cast<double>(n));
    f.iterations = iter;
    f.converged = converged || iter < max_iterations;
    if (!std::isfinite(f.fwhm) || !std::isfinite(f.amplitude))
        throw numerical_error("fit_lorentzian: fit diverged");
    return f;
}

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw config_error("fit_linear: x/y size mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw config_error("fit_linear: need at least 3 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0)) throw numerical_error("fit_linear: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// Delay from a phase-versus-frequency line: phase = -2 pi f tau.
inline double delay_from_phase_slope(const LinearFit& f) { return -f.slope / two_pi; }

}  // namespace slowlight
