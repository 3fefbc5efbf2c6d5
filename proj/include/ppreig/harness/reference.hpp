#pragma once

// Model problems and their reference eigenpairs.

#include "../fe_space.hpp"
#include "../mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppreig::harness {

enum class Problem { square_laplace, lshape_laplace, harmonic_oscillator };

inline Problem parse_problem(const std::string& s)
{
    if (s == "square_laplace") return Problem::square_laplace;
    if (s == "lshape_laplace") return Problem::lshape_laplace;
    if (s == "harmonic_oscillator") return Problem::harmonic_oscillator;
    throw std::invalid_argument("unknown problem '" + s + "'");
}

inline std::string to_string(Problem p)
{
    switch (p) {
    case Problem::square_laplace: return "square_laplace";
    case Problem::lshape_laplace: return "lshape_laplace";
    case Problem::harmonic_oscillator: return "harmonic_oscillator";
    }
    return "?";
}

inline Coefficients coefficients(Problem p)
{
    return p == Problem::harmonic_oscillator ? Coefficients::harmonic_oscillator() : Coefficients::laplace();
}

/// Structured mesh with n cells per unit length.
inline Mesh structured_mesh(Problem p, int n)
{
    switch (p) {
    case Problem::square_laplace: return generate_uniform_square(n);
    case Problem::lshape_laplace: return generate_lshape(n);
    case Problem::harmonic_oscillator: return generate_uniform_rectangle(-5.0, 5.0, -5.0, 5.0, 10 * n, 10 * n);
    }
    throw std::invalid_argument("structured_mesh: unknown problem");
}

struct ReferenceSolution {
    double eigenvalue = 0.0;
    /// Multiplicity of the eigenvalue; eigenfunction errors are reported only when it is 1.
    int multiplicity = 1;
    /// Normalized to a(u, u) = 1; absent when unknown or not unique.
    std::optional<ExactFunction> eigenfunction;
    std::string provenance;
};

/**
 * i-th smallest eigenvalue (k^2 + l^2) pi^2 of the Dirichlet Laplacian on
 * the unit square, eigenfunction sin(k pi x) sin(l pi y). Equal values are
 * ordered by k.
 */
inline ReferenceSolution reference_square(int i)
{
    if (i < 1) throw std::invalid_argument("reference_square: index is 1-based");
    const int kmax = i + 2;
    std::vector<std::pair<int, int>> modes;
    for (int k = 1; k <= kmax; ++k)
        for (int l = 1; l <= kmax; ++l) modes.emplace_back(k, l);
    std::stable_sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
        return a.first * a.first + a.second * a.second < b.first * b.first + b.second * b.second;
    });
    const auto [k, l] = modes[static_cast<std::size_t>(i - 1)];
    const int s = k * k + l * l;
    const double pi = std::numbers::pi;
    ReferenceSolution ref;
    ref.eigenvalue = s * pi * pi;
    ref.multiplicity = static_cast<int>(std::count_if(modes.begin(), modes.end(), [s](const auto& m) {
        return m.first * m.first + m.second * m.second == s;
    }));
    ref.provenance = "(k^2 + l^2) pi^2 with k=" + std::to_string(k) + ", l=" + std::to_string(l);
    if (ref.multiplicity == 1) {
        // 2 sin sin has unit L2 norm; a(u, u) = lambda (u, u).
        const double c = 2.0 / std::sqrt(ref.eigenvalue);
        ref.eigenfunction = ExactFunction{
            [=](const Point& x) { return c * std::sin(k * pi * x.x()) * std::sin(l * pi * x.y()); },
            [=](const Point& x) {
                return Vec2(c * k * pi * std::cos(k * pi * x.x()) * std::sin(l * pi * x.y()),
                            c * l * pi * std::sin(k * pi * x.x()) * std::cos(l * pi * x.y()));
            }};
    }
    return ref;
}

/// First eigenvalue of the L-shaped domain, accurate to 14 digits (Betcke and Trefethen).
inline ReferenceSolution reference_lshape()
{
    return {9.6397238440219, 1, std::nullopt, "Betcke-Trefethen high-precision value"};
}

/// Ground state of -1/2 Laplacian + |x|^2/2 on R^2: lambda = 1, u = exp(-|x|^2/2) / sqrt(pi).
inline ReferenceSolution reference_oscillator()
{
    const double c = 1.0 / std::sqrt(std::numbers::pi);
    ExactFunction u{[c](const Point& x) { return c * std::exp(-0.5 * x.squaredNorm()); },
                    [c](const Point& x) { return (-c * std::exp(-0.5 * x.squaredNorm()) * x).eval(); }};
    return {1.0, 1, u, "exact ground state on R^2"};
}

inline ReferenceSolution reference(Problem p, int i)
{
    switch (p) {
    case Problem::square_laplace: return reference_square(i);
    case Problem::lshape_laplace:
        if (i != 1) throw std::invalid_argument("reference: only the first L-shape eigenvalue is known");
        return reference_lshape();
    case Problem::harmonic_oscillator:
        if (i != 1) throw std::invalid_argument("reference: only the oscillator ground state is known");
        return reference_oscillator();
    }
    throw std::invalid_argument("reference: unknown problem");
}

} // namespace ppreig::harness
