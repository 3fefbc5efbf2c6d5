#pragma once

// Vertex patches for least-squares quadratic fitting.

#include "mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppreig {

struct Patch {
    int center = no_index;
    /// Ascending, contains center.
    std::vector<int> sample_vertices;
    /// Ascending.
    std::vector<int> elements;
};

/// Smallest singular value accepted for the scaled quadratic fitting matrix.
inline constexpr double patch_rank_tolerance = 1e-8;
/// Patches keep growing while the fit is this badly conditioned; a nearly
/// degenerate six-point fit near the boundary amplifies nodal noise badly.
inline constexpr double patch_condition_target = 1e-2;

/// Largest distance from the center to a sample vertex.
inline double patch_scale(const Mesh& mesh, int center, const std::vector<int>& samples)
{
    double r = 0.0;
    for (int v : samples) r = std::max(r, (mesh.vertex(v) - mesh.vertex(center)).norm());
    return r;
}

/**
 * Quadratic Vandermonde matrix in the local frame (x - z) / scale, columns
 * 1, s, t, s^2, s t, t^2.
 */
inline Eigen::MatrixXd fitting_matrix(const Mesh& mesh, int center, const std::vector<int>& samples,
                                      double scale)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(samples.size()), 6);
    const Point& z = mesh.vertex(center);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Point p = (mesh.vertex(samples[i]) - z) / scale;
        v.row(static_cast<Eigen::Index>(i)) << 1.0, p.x(), p.y(), p.x() * p.x(), p.x() * p.y(),
            p.y() * p.y();
    }
    return v;
}

inline double smallest_singular_value(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

/**
 * Patch around z grown one ring of elements at a time until it holds at
 * least six vertices and the scaled fitting matrix is well conditioned;
 * a patch that cannot grow further only needs full column rank.
 */
inline Patch build_patch(const Mesh& mesh, int z)
{
    if (z < 0 || z >= mesh.num_vertices()) throw std::invalid_argument("build_patch: vertex out of range");
    if (mesh.num_vertices() < 6)
        throw std::invalid_argument("build_patch: mesh has fewer than six vertices");

    Patch patch;
    patch.center = z;
    patch.sample_vertices = {z};
    std::vector<char> in_elements(mesh.num_triangles(), 0);
    std::vector<char> in_samples(mesh.num_vertices(), 0);
    in_samples[z] = 1;
    while (true) {
        const std::vector<int> frontier = patch.sample_vertices;
        bool grew = false;
        for (int v : frontier)
            for (int t : mesh.vertex_triangles(v)) {
                if (in_elements[t]) continue;
                in_elements[t] = 1;
                patch.elements.push_back(t);
                grew = true;
                for (int w : mesh.triangle(t))
                    if (!in_samples[w]) {
                        in_samples[w] = 1;
                        patch.sample_vertices.push_back(w);
                    }
            }
        std::sort(patch.elements.begin(), patch.elements.end());
        std::sort(patch.sample_vertices.begin(), patch.sample_vertices.end());
        double sigma = 0.0;
        if (patch.sample_vertices.size() >= 6) {
            const double scale = patch_scale(mesh, z, patch.sample_vertices);
            sigma = smallest_singular_value(fitting_matrix(mesh, z, patch.sample_vertices, scale));
            if (sigma >= patch_condition_target) return patch;
        }
        if (!grew) {
            if (sigma >= patch_rank_tolerance) return patch;
            throw std::runtime_error("build_patch: no patch with a full-rank quadratic fit around vertex " +
                                     std::to_string(z));
        }
    }
}

} // namespace ppreig
