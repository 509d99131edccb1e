#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    GaussLegendreRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    std::lock_guard<std::mutex> lk(mtx);
    cache.emplace(n, r);
    return r;
}

/// A location/scale pair marking a sharp feature of the integrand.
struct FeatureCenter {
    double position;
    double width;  // > 0
};

/// Composite panel decomposition of [-half_span, half_span]: panel edges
/// grow geometrically (factor 2) away from each feature center, so a fixed
/// Gauss-Legendre order per panel resolves structure much narrower than the
/// window. Plain single-interval Gauss-Legendre cannot: the response core
/// can be 100-1000x narrower than the distribution window.
inline std::vector<double> panel_edges(double half_span,
                                       const std::vector<FeatureCenter>& centers) {
    std::vector<double> edges{-half_span, half_span};
    for (const auto& c : centers) {
        if (!(c.position > -half_span && c.position < half_span)) continue;
        edges.push_back(c.position);
        double w = std::max(c.width, half_span * 1e-12);
        for (double r = w; r <= 2.0 * half_span; r *= 2.0) {
            if (c.position - r > -half_span) edges.push_back(c.position - r);
            if (c.position + r < half_span) edges.push_back(c.position + r);
        }
    }
    std::sort(edges.begin(), edges.end());
    // drop near-duplicate edges
    std::vector<double> out;
    out.reserve(edges.size());
    const double tol = half_span * 1e-12;
    for (double e : edges)
        if (out.empty() || e - out.back() > tol) out.push_back(e);
    out.back() = half_span;
    return out;
}

struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights of the composite rule; `order` points per panel.
inline QuadratureGrid panel_nodes(double half_span,
                                  const std::vector<FeatureCenter>& centers,
                                  int order) {
    const auto edges = panel_edges(half_span, centers);
    const auto gl = gauss_legendre(order);
    QuadratureGrid g;
    g.nodes.reserve((edges.size() - 1) * order);
    g.weights.reserve((edges.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double rad = 0.5 * (edges[p + 1] - edges[p]);
        for (int i = 0; i < order; ++i) {
            g.nodes.push_back(mid + rad * gl.nodes[i]);
            g.weights.push_back(rad * gl.weights[i]);
        }
    }
    return g;
}

/// Normalized line-shape density (unit area over the full real line).
inline double lineshape_pdf(double x, double fwhm, LineShape shape) {
    if (shape == LineShape::Lorentzian) {
        const double g = 0.5 * fwhm;
        return (g / pi) / (x * x + g * g);
    }
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(two_pi));
}

}  // namespace slowlight
