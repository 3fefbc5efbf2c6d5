#pragma once

// Continuous Lagrange P1/P2 spaces on a Mesh, coefficient fields and
// finite element functions.

#include "mesh.hpp"
#include "quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace ppreig {

using Vector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// Coefficients of -div(D grad u) + c u.
struct Coefficients {
    std::function<Matrix2(const Point&)> diffusion;
    std::function<double(const Point&)> reaction;
    /// Constant D and c: assembly uses the degree-4 rule, otherwise degree 6.
    bool constant = true;

    int quadrature_degree() const { return constant ? 4 : 6; }

    static Coefficients laplace()
    {
        return {[](const Point&) { return Matrix2::Identity().eval(); },
                [](const Point&) { return 0.0; }, true};
    }

    static Coefficients scaled_laplace(double d)
    {
        return {[d](const Point&) { return (d * Matrix2::Identity()).eval(); },
                [](const Point&) { return 0.0; }, true};
    }

    /// -1/2 Laplacian + |x|^2/2.
    static Coefficients harmonic_oscillator()
    {
        return {[](const Point&) { return (0.5 * Matrix2::Identity()).eval(); },
                [](const Point& x) { return 0.5 * x.squaredNorm(); }, false};
    }
};

/// Gradients of the barycentric coordinates of triangle t.
inline std::array<Vec2, 3> barycentric_gradients(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangle(t);
    const double two_area = 2.0 * mesh.area(t);
    std::array<Vec2, 3> g;
    for (int i = 0; i < 3; ++i) {
        const Point& p = mesh.vertex(tri[(i + 1) % 3]);
        const Point& q = mesh.vertex(tri[(i + 2) % 3]);
        g[i] = Vec2(p.y() - q.y(), q.x() - p.x()) / two_area;
    }
    return g;
}

inline Point barycentric_to_point(const Mesh& mesh, int t, const Eigen::Vector3d& bary)
{
    const auto& tri = mesh.triangle(t);
    return bary[0] * mesh.vertex(tri[0]) + bary[1] * mesh.vertex(tri[1]) +
           bary[2] * mesh.vertex(tri[2]);
}

/**
 * Local shape functions. P2 local order: three vertex functions, then the
 * three edge functions with edge k opposite local vertex k.
 */
struct LocalBasis {
    int count = 0;
    std::array<double, 6> value{};
    std::array<Vec2, 6> gradient{};
};

inline void evaluate_basis(int order, const Eigen::Vector3d& l, const std::array<Vec2, 3>& dl,
                           LocalBasis& out)
{
    if (order == 1) {
        out.count = 3;
        for (int i = 0; i < 3; ++i) {
            out.value[i] = l[i];
            out.gradient[i] = dl[i];
        }
        return;
    }
    out.count = 6;
    for (int i = 0; i < 3; ++i) {
        out.value[i] = l[i] * (2.0 * l[i] - 1.0);
        out.gradient[i] = (4.0 * l[i] - 1.0) * dl[i];
    }
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        out.value[3 + k] = 4.0 * l[i] * l[j];
        out.gradient[3 + k] = 4.0 * (l[i] * dl[j] + l[j] * dl[i]);
    }
}

/**
 * Lagrange finite element space of order 1 or 2 with homogeneous Dirichlet
 * conditions on the whole boundary. Vertex dofs come first, then one dof per
 * global edge (order 2), so P1 data embeds into P2 by prefix.
 */
class FeSpace {
public:
    FeSpace(MeshPtr mesh, int order) : mesh_(std::move(mesh)), order_(order)
    {
        if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
        if (order_ != 1 && order_ != 2) throw std::invalid_argument("FeSpace: order must be 1 or 2");
        const int nv = mesh_->num_vertices();
        const int ndof = order_ == 1 ? nv : nv + mesh_->num_edges();
        coords_.reserve(ndof);
        dirichlet_.assign(ndof, 0);
        for (int v = 0; v < nv; ++v) {
            coords_.push_back(mesh_->vertex(v));
            dirichlet_[v] = mesh_->is_boundary_vertex(v);
        }
        if (order_ == 2) {
            for (int e = 0; e < mesh_->num_edges(); ++e) {
                const auto& key = mesh_->edges()[e];
                coords_.push_back(0.5 * (mesh_->vertex(key[0]) + mesh_->vertex(key[1])));
                dirichlet_[nv + e] = mesh_->is_boundary_edge(e);
            }
        }
        dpe_ = order_ == 1 ? 3 : 6;
        element_dofs_.resize(static_cast<std::size_t>(dpe_) * mesh_->num_triangles());
        for (int t = 0; t < mesh_->num_triangles(); ++t) {
            for (int i = 0; i < 3; ++i) element_dofs_[dpe_ * t + i] = mesh_->triangle(t)[i];
            if (order_ == 2)
                for (int k = 0; k < 3; ++k)
                    element_dofs_[dpe_ * t + 3 + k] = nv + mesh_->triangle_edges(t)[k];
        }
        free_index_.assign(ndof, no_index);
        for (int d = 0; d < ndof; ++d)
            if (!dirichlet_[d]) {
                free_index_[d] = static_cast<int>(free_dofs_.size());
                free_dofs_.push_back(d);
            }
    }

    const Mesh& mesh() const { return *mesh_; }
    const MeshPtr& mesh_ptr() const { return mesh_; }
    int order() const { return order_; }
    int num_dofs() const { return static_cast<int>(coords_.size()); }
    int num_free() const { return static_cast<int>(free_dofs_.size()); }
    int dofs_per_element() const { return dpe_; }

    const std::vector<Point>& dof_coords() const { return coords_; }
    bool is_dirichlet(int d) const { return dirichlet_[d] != 0; }
    const std::vector<int>& free_dofs() const { return free_dofs_; }
    /// Position of dof d among the free dofs, or no_index.
    int free_index(int d) const { return free_index_[d]; }

    std::span<const int> element_dofs(int t) const
    {
        return {element_dofs_.data() + static_cast<std::size_t>(dpe_) * t,
                static_cast<std::size_t>(dpe_)};
    }

    Vector restrict_to_free(const Vector& full) const
    {
        Vector out(num_free());
        for (int i = 0; i < num_free(); ++i) out[i] = full[free_dofs_[i]];
        return out;
    }

    /// Full vector with zero Dirichlet values.
    Vector extend_from_free(const Vector& free) const
    {
        if (free.size() != num_free())
            throw std::invalid_argument("FeSpace: free vector has wrong length");
        Vector out = Vector::Zero(num_dofs());
        for (int i = 0; i < num_free(); ++i) out[free_dofs_[i]] = free[i];
        return out;
    }

private:
    MeshPtr mesh_;
    int order_;
    int dpe_ = 3;
    std::vector<Point> coords_;
    std::vector<char> dirichlet_;
    std::vector<int> free_dofs_;
    std::vector<int> free_index_;
    std::vector<int> element_dofs_;
};

using SpacePtr = std::shared_ptr<const FeSpace>;

inline SpacePtr make_space(MeshPtr mesh, int order)
{
    return std::make_shared<const FeSpace>(std::move(mesh), order);
}

/// Coefficient vector over all dofs of a space.
struct FeFunction {
    SpacePtr space;
    Vector values;

    FeFunction(SpacePtr s, Vector v) : space(std::move(s)), values(std::move(v))
    {
        if (!space) throw std::invalid_argument("FeFunction: null space");
        if (values.size() != space->num_dofs())
            throw std::invalid_argument("FeFunction: value count does not match the space");
    }

    double value(int t, const Eigen::Vector3d& bary) const
    {
        LocalBasis b;
        evaluate_basis(space->order(), bary, barycentric_gradients(space->mesh(), t), b);
        const auto dofs = space->element_dofs(t);
        double s = 0.0;
        for (int i = 0; i < b.count; ++i) s += values[dofs[i]] * b.value[i];
        return s;
    }

    Vec2 gradient(int t, const Eigen::Vector3d& bary) const
    {
        LocalBasis b;
        evaluate_basis(space->order(), bary, barycentric_gradients(space->mesh(), t), b);
        const auto dofs = space->element_dofs(t);
        Vec2 g = Vec2::Zero();
        for (int i = 0; i < b.count; ++i) g += values[dofs[i]] * b.gradient[i];
        return g;
    }
};

/// Nodal interpolation: values[i] = f(dof_coords[i]).
inline FeFunction interpolate(SpacePtr space, const std::function<double(const Point&)>& f)
{
    Vector v(space->num_dofs());
    for (int d = 0; d < space->num_dofs(); ++d) v[d] = f(space->dof_coords()[d]);
    return FeFunction(std::move(space), std::move(v));
}

/// P1 nodal data embedded exactly into the P2 space on the same mesh.
inline Vector embed_p1_in_p2(const FeSpace& p2, const Vector& p1_values)
{
    const Mesh& mesh = p2.mesh();
    if (p2.order() != 2 || p1_values.size() != mesh.num_vertices())
        throw std::invalid_argument("embed_p1_in_p2: incompatible space or data");
    Vector out(p2.num_dofs());
    out.head(mesh.num_vertices()) = p1_values;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto& key = mesh.edges()[e];
        out[mesh.num_vertices() + e] = 0.5 * (p1_values[key[0]] + p1_values[key[1]]);
    }
    return out;
}

/// A reference function with its gradient.
struct ExactFunction {
    std::function<double(const Point&)> value;
    std::function<Vec2(const Point&)> gradient;

    ExactFunction scaled(double s) const
    {
        auto v = value;
        auto g = gradient;
        return {[v, s](const Point& x) { return s * v(x); },
                [g, s](const Point& x) { return (s * g(x)).eval(); }};
    }
};

struct Norms {
    double l2 = 0.0;
    /// sqrt(a(e, e)).
    double energy = 0.0;
    /// ||D^{1/2} grad e||_0, the energy norm without the reaction term.
    double gradient = 0.0;
};

namespace detail {

inline Norms accumulate_norms(const FeFunction& u, const ExactFunction* ref, const Coefficients& coeff)
{
    const FeSpace& space = *u.space;
    const Mesh& mesh = space.mesh();
    const auto& rule = quadrature(ref ? 6 : 2 * space.order() + (coeff.constant ? 0 : 2));
    double l2 = 0.0, grad = 0.0, react = 0.0;
    LocalBasis b;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto dl = barycentric_gradients(mesh, t);
        const double area = mesh.area(t);
        const auto dofs = space.element_dofs(t);
        for (const auto& q : rule.points()) {
            evaluate_basis(space.order(), q.bary, dl, b);
            double val = 0.0;
            Vec2 g = Vec2::Zero();
            for (int i = 0; i < b.count; ++i) {
                val += u.values[dofs[i]] * b.value[i];
                g += u.values[dofs[i]] * b.gradient[i];
            }
            const Point x = barycentric_to_point(mesh, t, q.bary);
            if (ref) {
                val -= ref->value(x);
                g -= ref->gradient(x);
            }
            const double w = q.weight * area;
            l2 += w * val * val;
            grad += w * g.dot(coeff.diffusion(x) * g);
            react += w * coeff.reaction(x) * val * val;
        }
    }
    return {std::sqrt(l2), std::sqrt(grad + react), std::sqrt(grad)};
}

} // namespace detail

/// ||u|| in L2, energy and weighted-gradient norms.
inline Norms norms(const FeFunction& u, const Coefficients& coeff)
{
    return detail::accumulate_norms(u, nullptr, coeff);
}

/// ||u - reference|| in the same norms, by degree-6 quadrature.
inline Norms norms(const FeFunction& u, const ExactFunction& reference, const Coefficients& coeff)
{
    return detail::accumulate_norms(u, &reference, coeff);
}

/// (u, f) by degree-6 quadrature.
inline double inner_product(const FeFunction& u, const std::function<double(const Point&)>& f)
{
    const Mesh& mesh = u.space->mesh();
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.area(t);
        for (const auto& q : quadrature_degree6().points())
            s += q.weight * area * u.value(t, q.bary) *
                 f(barycentric_to_point(mesh, t, q.bary));
    }
    return s;
}

} // namespace ppreig
