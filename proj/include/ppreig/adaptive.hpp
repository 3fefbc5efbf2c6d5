#pragma once

// Multilevel adaptive eigensolvers: one eigensolve on the initial mesh, then
// per level a recovery-based estimate, Doerfler marking, bisection and a
// single boundary-value solve on the refined mesh.

#include "assembly.hpp"
#include "eigensolver.hpp"
#include "marking.hpp"
#include "ppr.hpp"

#include <stdexcept>
#include <vector>

namespace ppreig {

enum class AdaptiveVariant {
    /// a(u, v) = lambda (u_prev, v)
    inverse_step,
    /// a(u, v) - lambda (u, v) = (u_prev, v)
    shifted_inverse_step,
};

struct AdaptiveOptions {
    double theta = 0.4;
    /// Stop once eta^2 < tolerance.
    double tolerance = 1e-10;
    AdaptiveVariant variant = AdaptiveVariant::inverse_step;
    int max_levels = 25;
    EigsOptions eigs{};
};

struct AdaptiveState {
    int level = 0;
    MeshPtr mesh;
    /// (u, u) = 1.
    FeFunction u;
    RecoveredGradient recovered;
    EstimatorField estimator;
    /// a(u, u) / (u, u)
    double rayleigh = 0.0;
    /// rayleigh - eta^2
    double enhanced = 0.0;
    /// Number of vertices (P1 dofs including the boundary).
    int dofs = 0;
};

struct AdaptiveTrace {
    std::vector<AdaptiveState> states;
    /// False if max_levels was reached before eta^2 < tolerance.
    bool converged = false;
};

namespace detail {

inline AdaptiveState make_state(int level, MeshPtr mesh, SpacePtr space, Vector full_values,
                                double rayleigh, const Coefficients& coeff)
{
    FeFunction u(std::move(space), std::move(full_values));
    RecoveredGradient g = recover(u);
    EstimatorField eta = estimate(u, g, coeff);
    const double enhanced = rayleigh - eta.global_squared();
    const int dofs = mesh->num_vertices();
    return {level, std::move(mesh), std::move(u), std::move(g), std::move(eta), rayleigh, enhanced, dofs};
}

} // namespace detail

inline AdaptiveTrace adaptive_loop(const MeshPtr& initial, const Coefficients& coeff,
                                   const AdaptiveOptions& options)
{
    if (!(options.theta >= 0.0 && options.theta < 1.0))
        throw std::invalid_argument("adaptive_loop: theta must lie in [0, 1)");
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("adaptive_loop: tolerance must be positive");
    if (options.max_levels < 1) throw std::invalid_argument("adaptive_loop: max_levels must be >= 1");

    AdaptiveTrace trace;
    {
        const SpacePtr space = make_space(initial, 1);
        const auto ops = assemble_reduced(*space, coeff);
        auto pairs = eigs_smallest(ops.stiffness, ops.mass, 1, Normalization::l2, options.eigs);
        trace.states.push_back(detail::make_state(0, initial, space, space->extend_from_free(pairs[0].vector),
                                                  pairs[0].value, coeff));
    }

    for (int level = 0;; ++level) {
        const AdaptiveState& current = trace.states.back();
        if (current.estimator.global_squared() < options.tolerance) {
            trace.converged = true;
            break;
        }
        if (level + 1 >= options.max_levels) break;

        const auto marked = dorfler_mark(current.estimator, options.theta);
        auto refined = std::make_shared<const Mesh>(bisect(*current.mesh, marked));
        const SpacePtr space = make_space(refined, 1);
        const auto ops = assemble_reduced(*space, coeff);
        const Vector previous =
            space->restrict_to_free(prolongate_p1(*current.mesh, current.u.values, *refined));
        const Vector rhs = ops.mass * previous;

        Vector u;
        if (options.variant == AdaptiveVariant::inverse_step) {
            u = Factorization(ops.stiffness).solve(current.enhanced * rhs);
        } else {
            const SparseMatrix shifted = ops.stiffness - current.enhanced * ops.mass;
            u = Factorization(shifted).solve(rhs);
        }
        if (u.dot(rhs) < 0.0) u = -u;
        const double mass_uu = u.dot(ops.mass * u);
        u /= std::sqrt(mass_uu);
        const double rayleigh = u.dot(ops.stiffness * u);
        trace.states.push_back(
            detail::make_state(level + 1, refined, space, space->extend_from_free(u), rayleigh, coeff));
    }
    return trace;
}

} // namespace ppreig
