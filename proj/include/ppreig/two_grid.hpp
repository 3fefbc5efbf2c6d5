#pragma once

// Two-grid eigensolvers: a coarse P1 eigensolve, one shifted solve on the
// fine level, then either PPR enhancement of the Rayleigh quotient
// (algorithm1), a quadratic fine space (algorithm2), or the plain Rayleigh
// quotient (baseline shift-inverse two-grid scheme).

#include "assembly.hpp"
#include "eigensolver.hpp"
#include "ppr.hpp"

#include <optional>
#include <stdexcept>

namespace ppreig {

enum class TwoGridMethod { recovery_enhanced, quadratic_fine, baseline };

struct TwoGridResult {
    /// (lambda_{i,H}, u_{i,H}) over the coarse free dofs, a(u, u) = 1.
    EigenPair coarse_pair;
    SpacePtr coarse_space;
    /// Fine solution with a(u, u) = 1.
    FeFunction fine_function;
    std::optional<RecoveredGradient> recovered;
    std::optional<EstimatorField> estimator;
    double rayleigh = 0.0;
    double enhanced_value = 0.0;
    /// 1-based eigenvalue index.
    int index = 1;
    /// Set when lambda_H was a fine eigenvalue to working precision and the
    /// shift had to be moved off it (coarse = fine, for instance).
    bool shift_nudged = false;
};

namespace detail {

inline constexpr double shift_nudge = 1e-10;

inline TwoGridResult two_grid(const MeshPtr& coarse, const MeshPtr& fine, const Coefficients& coeff,
                              int index, TwoGridMethod method, const EigsOptions& eigs_options)
{
    if (index < 1) throw std::invalid_argument("two_grid: eigenvalue index is 1-based");
    if (!coarse || !fine) throw std::invalid_argument("two_grid: null mesh");

    const SpacePtr coarse_space = make_space(coarse, 1);
    if (index > coarse_space->num_free())
        throw std::invalid_argument("two_grid: index exceeds the coarse spectrum");
    const auto coarse_ops = assemble_reduced(*coarse_space, coeff);
    auto pairs = eigs_smallest(coarse_ops.stiffness, coarse_ops.mass, index, Normalization::energy,
                               eigs_options);
    EigenPair coarse_pair = std::move(pairs[static_cast<std::size_t>(index - 1)]);

    const Vector coarse_full = coarse_space->extend_from_free(coarse_pair.vector);
    const Vector fine_p1 = prolongate_p1(*coarse, coarse_full, *fine);

    const int order = method == TwoGridMethod::quadratic_fine ? 2 : 1;
    const SpacePtr fine_space = make_space(fine, order);
    const Vector transferred = order == 2 ? embed_p1_in_p2(*fine_space, fine_p1) : fine_p1;
    const auto fine_ops = assemble_reduced(*fine_space, coeff);

    // (A_h - lambda_H B_h) u = B_h u_H
    const Vector rhs = fine_ops.mass * fine_space->restrict_to_free(transferred);
    bool nudged = false;
    Vector u = [&] {
        try {
            return Factorization(SparseMatrix(fine_ops.stiffness - coarse_pair.value * fine_ops.mass)).solve(rhs);
        } catch (const SingularMatrixError&) {
            // Inverse iteration at an exact eigenvalue: step just below it.
            nudged = true;
            const double shift = coarse_pair.value * (1.0 - shift_nudge);
            return Factorization(SparseMatrix(fine_ops.stiffness - shift * fine_ops.mass)).solve(rhs);
        }
    }();
    if (u.dot(rhs) < 0.0) u = -u; // align with the coarse eigenfunction

    const double energy = u.dot(fine_ops.stiffness * u);
    if (!(energy > 0.0)) throw std::runtime_error("two_grid: fine solution has no energy");
    u /= std::sqrt(energy);
    const double mass_uu = u.dot(fine_ops.mass * u);
    const double rayleigh = 1.0 / mass_uu;

    TwoGridResult result{std::move(coarse_pair), coarse_space,
                         FeFunction(fine_space, fine_space->extend_from_free(u)),
                         std::nullopt, std::nullopt, rayleigh, rayleigh, index, nudged};
    if (method == TwoGridMethod::recovery_enhanced) {
        result.recovered = recover(result.fine_function);
        result.estimator = estimate(result.fine_function, *result.recovered, coeff);
        result.enhanced_value = enhance_eigenvalue(rayleigh, result.estimator->global, mass_uu);
    }
    return result;
}

} // namespace detail

/// Shifted-inverse two-grid step on the fine P1 space plus PPR enhancement.
inline TwoGridResult algorithm1(const MeshPtr& coarse, const MeshPtr& fine, const Coefficients& coeff,
                                int index, const EigsOptions& eigs_options = {})
{
    return detail::two_grid(coarse, fine, coeff, index, TwoGridMethod::recovery_enhanced, eigs_options);
}

/// Shifted solve on the fine quadratic space; Rayleigh quotient.
inline TwoGridResult algorithm2(const MeshPtr& coarse, const MeshPtr& fine, const Coefficients& coeff,
                                int index, const EigsOptions& eigs_options = {})
{
    return detail::two_grid(coarse, fine, coeff, index, TwoGridMethod::quadratic_fine, eigs_options);
}

/// Shifted-inverse two-grid scheme without enhancement.
inline TwoGridResult baseline_two_grid(const MeshPtr& coarse, const MeshPtr& fine,
                                       const Coefficients& coeff, int index,
                                       const EigsOptions& eigs_options = {})
{
    return detail::two_grid(coarse, fine, coeff, index, TwoGridMethod::baseline, eigs_options);
}

inline TwoGridResult run_two_grid(TwoGridMethod method, const MeshPtr& coarse, const MeshPtr& fine,
                                  const Coefficients& coeff, int index,
                                  const EigsOptions& eigs_options = {})
{
    return detail::two_grid(coarse, fine, coeff, index, method, eigs_options);
}

} // namespace ppreig
