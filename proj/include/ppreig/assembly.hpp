#pragma once

// Stiffness and mass assembly for a(u,v) = (D grad u, grad v) + (c u, v).

#include "fe_space.hpp"
#include "sparse.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ppreig {

namespace detail {

inline void check_diffusion(const Matrix2& d, const Point& x)
{
    const double tol = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
    const bool symmetric = std::abs(d(0, 1) - d(1, 0)) <= tol;
    const bool positive = d(0, 0) > 0.0 && d.determinant() > 0.0;
    if (!symmetric || !positive)
        throw std::invalid_argument("assemble_stiffness: diffusion is not symmetric positive definite at (" +
                                    std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
}

template <typename Kernel>
SparseMatrix assemble(const FeSpace& space, const QuadratureRule& rule, Kernel&& kernel)
{
    const Mesh& mesh = space.mesh();
    const int dpe = space.dofs_per_element();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * dpe * dpe);
    Eigen::Matrix<double, 6, 6> local;
    LocalBasis b;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto dl = barycentric_gradients(mesh, t);
        const double area = mesh.area(t);
        local.setZero();
        for (const auto& q : rule.points()) {
            evaluate_basis(space.order(), q.bary, dl, b);
            kernel(barycentric_to_point(mesh, t, q.bary), q.weight * area, b, local);
        }
        const auto dofs = space.element_dofs(t);
        for (int i = 0; i < dpe; ++i)
            for (int j = 0; j < dpe; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
    }
    return from_triplets(space.num_dofs(), triplets);
}

} // namespace detail

/// A_ij = a(phi_j, phi_i) over all dofs, Dirichlet dofs included.
inline SparseMatrix assemble_stiffness(const FeSpace& space, const Coefficients& coeff)
{
    for (const auto& p : space.mesh().vertices())
        if (coeff.reaction(p) < 0.0)
            throw std::invalid_argument("assemble_stiffness: reaction coefficient is negative");
    return detail::assemble(space, quadrature(coeff.quadrature_degree()),
                            [&](const Point& x, double w, const LocalBasis& b, auto& local) {
                                const Matrix2 d = coeff.diffusion(x);
                                detail::check_diffusion(d, x);
                                const double c = coeff.reaction(x);
                                for (int i = 0; i < b.count; ++i) {
                                    const Vec2 dg = d * b.gradient[i];
                                    for (int j = 0; j < b.count; ++j)
                                        local(i, j) += w * (dg.dot(b.gradient[j]) +
                                                            c * b.value[i] * b.value[j]);
                                }
                            });
}

/// B_ij = (phi_j, phi_i).
inline SparseMatrix assemble_mass(const FeSpace& space)
{
    return detail::assemble(space, quadrature_degree4(),
                            [](const Point&, double w, const LocalBasis& b, auto& local) {
                                for (int i = 0; i < b.count; ++i)
                                    for (int j = 0; j < b.count; ++j)
                                        local(i, j) += w * b.value[i] * b.value[j];
                            });
}

/// Principal submatrix on the free (non-Dirichlet) dofs.
inline SparseMatrix apply_dirichlet(const SparseMatrix& a, const FeSpace& space)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nonZeros()));
    for (int r = 0; r < a.outerSize(); ++r) {
        const int fr = space.free_index(r);
        if (fr == no_index) continue;
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
            const int fc = space.free_index(static_cast<int>(it.col()));
            if (fc != no_index) triplets.emplace_back(fr, fc, it.value());
        }
    }
    return from_triplets(space.num_free(), triplets);
}

/// Reduced stiffness and mass pair for a space.
struct DiscreteOperators {
    SparseMatrix stiffness;
    SparseMatrix mass;
};

inline DiscreteOperators assemble_reduced(const FeSpace& space, const Coefficients& coeff)
{
    return {apply_dirichlet(assemble_stiffness(space, coeff), space),
            apply_dirichlet(assemble_mass(space), space)};
}

} // namespace ppreig
