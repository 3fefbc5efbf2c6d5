#pragma once

// Doerfler marking, effectivity index and convergence-rate helpers.

#include "ppr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace ppreig {

/**
 * Minimal bulk set: elements taken by descending eta^2 (ties by index) until
 * their sum reaches theta times the total. Always returns at least one
 * element.
 */
inline std::vector<int> dorfler_mark(const EstimatorField& estimator, double theta)
{
    if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("dorfler_mark: theta must lie in [0, 1)");
    const auto& eta = estimator.local;
    if (eta.empty()) return {};
    std::vector<int> order(eta.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return eta[a] * eta[a] > eta[b] * eta[b]; });
    long double total = 0.0L;
    for (double e : eta) total += static_cast<long double>(e) * e;
    const long double target = static_cast<long double>(theta) * total;

    std::vector<int> marked;
    long double acc = 0.0L;
    for (int t : order) {
        marked.push_back(t);
        acc += static_cast<long double>(eta[t]) * eta[t];
        if (acc >= target) break;
    }
    return marked;
}

/// Post-hoc check of the bulk criterion.
inline bool satisfies_bulk_criterion(const EstimatorField& estimator, std::span<const int> marked,
                                     double theta)
{
    long double total = 0.0L, selected = 0.0L;
    for (double e : estimator.local) total += static_cast<long double>(e) * e;
    for (int t : marked) selected += static_cast<long double>(estimator.local[t]) * estimator.local[t];
    return selected >= static_cast<long double>(theta) * total;
}

/// kappa = eta^2 / |lambda_ref - lambda_h|.
inline double effectivity_index(double estimator_global, double lambda_ref, double lambda_h)
{
    if (lambda_ref == lambda_h)
        throw std::invalid_argument("effectivity_index: reference and approximation coincide");
    return estimator_global * estimator_global / std::abs(lambda_ref - lambda_h);
}

/// order_k = log(|e_{k-1}| / |e_k|) / log(s_{k-1} / s_k), one entry per consecutive pair.
inline std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> scales)
{
    if (errors.size() != scales.size() || errors.size() < 2)
        throw std::invalid_argument("convergence_order: need two or more errors with matching scales");
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (errors[k] == 0.0) throw std::invalid_argument("convergence_order: zero error, order undefined");
        if (!(scales[k] > 0.0)) throw std::invalid_argument("convergence_order: scales must be positive");
    }
    std::vector<double> out;
    for (std::size_t k = 1; k < errors.size(); ++k)
        out.push_back(std::log(std::abs(errors[k - 1]) / std::abs(errors[k])) /
                      std::log(scales[k - 1] / scales[k]));
    return out;
}

inline std::vector<double> convergence_order(const std::vector<double>& errors,
                                             const std::vector<double>& scales)
{
    return convergence_order(std::span<const double>(errors), std::span<const double>(scales));
}

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("loglog_slope: abscissae are all equal");
    return (n * sxy - sx * sy) / denom;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    return loglog_slope(std::span<const double>(x), std::span<const double>(y));
}

} // namespace ppreig
