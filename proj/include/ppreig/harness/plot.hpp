#pragma once

// Plot-data files for adaptive runs: whitespace columns readable by gnuplot,
// numpy.loadtxt and friends, followed by fitted log-log slopes.

#include "../adaptive.hpp"
#include "../marking.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace ppreig::harness {

struct PlotPoint {
    double vertices = 0.0;
    double rayleigh_error = 0.0;
    double enhanced_error = 0.0;
    double eta2 = 0.0;
    double kappa = 0.0;
};

struct PlotSlopes {
    double rayleigh_error = 0.0;
    double enhanced_error = 0.0;
    double eta2 = 0.0;
    std::size_t first = 0;
};

inline std::vector<PlotPoint> plot_points(const AdaptiveTrace& trace, double lambda_ref)
{
    std::vector<PlotPoint> out;
    for (const auto& s : trace.states) {
        const double eta2 = s.estimator.global_squared();
        const double err = std::abs(s.rayleigh - lambda_ref);
        out.push_back({static_cast<double>(s.dofs), err, std::abs(s.enhanced - lambda_ref), eta2,
                       err != 0.0 ? eta2 / err : std::nan("")});
    }
    return out;
}

/// Least-squares slopes against N over the final half of the points (at least two).
inline PlotSlopes final_half_slopes(std::span<const PlotPoint> points)
{
    if (points.size() < 2) return {std::nan(""), std::nan(""), std::nan(""), 0};
    const std::size_t first = points.size() - std::max<std::size_t>(2, (points.size() + 1) / 2);
    std::vector<double> n, a, b, c;
    for (std::size_t k = first; k < points.size(); ++k) {
        n.push_back(points[k].vertices);
        a.push_back(points[k].rayleigh_error);
        b.push_back(points[k].enhanced_error);
        c.push_back(points[k].eta2);
    }
    auto slope = [&n](const std::vector<double>& y) {
        for (double v : y)
            if (v == 0.0) return std::nan("");
        try {
            return loglog_slope(n, y);
        } catch (const std::invalid_argument&) {
            return std::nan("");
        }
    };
    return {slope(a), slope(b), slope(c), first};
}

inline std::string plot_data(std::span<const PlotPoint> points)
{
    std::string out = "# N |lambda_bar-lambda_ref| |lambda-lambda_ref| eta^2 kappa\n";
    char buf[160];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.0f %.10e %.10e %.10e %.8f\n", p.vertices, p.rayleigh_error,
                      p.enhanced_error, p.eta2, p.kappa);
        out += buf;
    }
    const PlotSlopes s = final_half_slopes(points);
    std::snprintf(buf, sizeof buf, "# slopes vs N over points %zu..%zu\n", s.first, points.empty() ? 0 : points.size() - 1);
    out += buf;
    std::snprintf(buf, sizeof buf, "# slope lambda_bar_error %.4f\n# slope lambda_error %.4f\n# slope eta2 %.4f\n",
                  s.rayleigh_error, s.enhanced_error, s.eta2);
    out += buf;
    return out;
}

inline std::string plot_data(const AdaptiveTrace& trace, double lambda_ref)
{
    const auto points = plot_points(trace, lambda_ref);
    return plot_data(std::span<const PlotPoint>(points));
}

} // namespace ppreig::harness
