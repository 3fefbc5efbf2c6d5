#pragma once

// Polynomial preserving recovery (PPR) of P1 gradients and the
// recovery-based a posteriori error estimator.

#include "fe_space.hpp"
#include "patch.hpp"
#include "sparse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ppreig {

/// G_h u: nodal gradient values on the P1 space, interpolated linearly.
struct RecoveredGradient {
    SpacePtr space;
    Vector gx;
    Vector gy;

    Vec2 at(int t, const Eigen::Vector3d& bary) const
    {
        const auto& tri = space->mesh().triangle(t);
        Vec2 g = Vec2::Zero();
        for (int i = 0; i < 3; ++i) g += bary[i] * Vec2(gx[tri[i]], gy[tri[i]]);
        return g;
    }
};

/**
 * The recovery operator of a fixed mesh as two sparse matrices (x and y
 * components). Row z holds the weights that map nodal values on the patch
 * of z to the gradient at z of the least-squares quadratic fit; the fit is
 * linear in the data, so the operator is built once per mesh.
 */
class RecoveryOperator {
public:
    explicit RecoveryOperator(const Mesh& mesh)
    {
        const int nv = mesh.num_vertices();
        std::vector<Eigen::Triplet<double>> tx, ty;
        tx.reserve(static_cast<std::size_t>(nv) * 8);
        ty.reserve(static_cast<std::size_t>(nv) * 8);
        for (int z = 0; z < nv; ++z) {
            const Patch patch = build_patch(mesh, z);
            const double scale = patch_scale(mesh, z, patch.sample_vertices);
            const Eigen::MatrixXd v = fitting_matrix(mesh, z, patch.sample_vertices, scale);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& s = svd.singularValues();
            if (s(s.size() - 1) < patch_rank_tolerance)
                throw std::runtime_error("RecoveryOperator: rank-deficient fit at vertex " +
                                         std::to_string(z));
            // Rows 1 and 2 of the pseudo-inverse give the linear coefficients.
            const Eigen::MatrixXd pinv =
                svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
            for (std::size_t i = 0; i < patch.sample_vertices.size(); ++i) {
                const int w = patch.sample_vertices[i];
                const auto col = static_cast<Eigen::Index>(i);
                tx.emplace_back(z, w, pinv(1, col) / scale);
                ty.emplace_back(z, w, pinv(2, col) / scale);
            }
        }
        gx_ = from_triplets(nv, tx);
        gy_ = from_triplets(nv, ty);
    }

    RecoveredGradient apply(const FeFunction& u) const
    {
        if (u.space->order() != 1) throw std::invalid_argument("recover: PPR is defined on P1 spaces only");
        if (u.values.size() != gx_.cols())
            throw std::invalid_argument("recover: function does not live on this operator's mesh");
        return {u.space, gx_ * u.values, gy_ * u.values};
    }

    const SparseMatrix& x_weights() const { return gx_; }
    const SparseMatrix& y_weights() const { return gy_; }

private:
    SparseMatrix gx_;
    SparseMatrix gy_;
};

inline RecoveredGradient recover(const FeFunction& u)
{
    if (u.space->order() != 1) throw std::invalid_argument("recover: PPR is defined on P1 spaces only");
    return RecoveryOperator(u.space->mesh()).apply(u);
}

/// Per-triangle eta(u, T) and the global value sqrt(sum eta(u, T)^2).
struct EstimatorField {
    std::vector<double> local;
    double global = 0.0;

    double global_squared() const { return global * global; }
};

/// eta(u, T) = ||D^{1/2} (G_h u - grad u)||_{0,T}.
inline EstimatorField estimate(const FeFunction& u, const RecoveredGradient& recovered,
                               const Coefficients& coeff)
{
    if (u.space->order() != 1 || recovered.space.get() != u.space.get())
        throw std::invalid_argument("estimate: recovered gradient must come from the same P1 function");
    const Mesh& mesh = u.space->mesh();
    const auto& rule = quadrature(coeff.constant ? 2 : 4);
    EstimatorField field;
    field.local.resize(mesh.num_triangles());
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto dl = barycentric_gradients(mesh, t);
        const auto& tri = mesh.triangle(t);
        const Vec2 grad = u.values[tri[0]] * dl[0] + u.values[tri[1]] * dl[1] + u.values[tri[2]] * dl[2];
        const double area = mesh.area(t);
        double s = 0.0;
        for (const auto& q : rule.points()) {
            const Vec2 e = recovered.at(t, q.bary) - grad;
            s += q.weight * area * e.dot(coeff.diffusion(barycentric_to_point(mesh, t, q.bary)) * e);
        }
        field.local[t] = std::sqrt(s);
        total += s;
    }
    field.global = std::sqrt(total);
    return field;
}

/// ||D^{1/2} (G_h u - g)||_0 for an exact gradient field g (degree-6 quadrature).
inline double recovered_gradient_error(const RecoveredGradient& recovered,
                                       const std::function<Vec2(const Point&)>& exact_gradient,
                                       const Coefficients& coeff)
{
    const Mesh& mesh = recovered.space->mesh();
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.area(t);
        for (const auto& q : quadrature_degree6().points()) {
            const Point x = barycentric_to_point(mesh, t, q.bary);
            const Vec2 e = recovered.at(t, q.bary) - exact_gradient(x);
            s += q.weight * area * e.dot(coeff.diffusion(x) * e);
        }
    }
    return std::sqrt(s);
}

/// ||G_h u||_0 (unweighted).
inline double recovered_l2_norm(const RecoveredGradient& recovered)
{
    const Mesh& mesh = recovered.space->mesh();
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t)
        for (const auto& q : quadrature_degree2().points())
            s += q.weight * mesh.area(t) * recovered.at(t, q.bary).squaredNorm();
    return std::sqrt(s);
}

/// rayleigh - eta^2 / (u, u).
inline double enhance_eigenvalue(double rayleigh, double estimator_global, double mass_uu)
{
    if (!(mass_uu > 0.0)) throw std::invalid_argument("enhance_eigenvalue: (u, u) must be positive");
    return rayleigh - estimator_global * estimator_global / mass_uu;
}

} // namespace ppreig
