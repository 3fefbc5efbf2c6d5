#pragma once

// Conforming triangulations of polygonal domains: structured generators,
// regular (red) refinement and newest-vertex bisection.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ppreig {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;
/// Sorted vertex pair (lo, hi).
using EdgeKey = std::array<int, 2>;

inline constexpr int no_index = -1;

namespace detail {

inline std::uint64_t pack_edge(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

inline double signed_area(const Point& a, const Point& b, const Point& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

} // namespace detail

/**
 * An immutable 2D triangulation.
 *
 * Triangles are stored counterclockwise. Local edge k of a triangle joins
 * local vertices (k+1)%3 and (k+2)%3, i.e. it is the edge opposite vertex k.
 * The refinement edge used by newest-vertex bisection is stored as such a
 * local index; the vertex opposite it is the "newest" vertex.
 *
 * Every vertex created by refinement remembers the two endpoints of the
 * edge it bisects (its parents). Parent indices are always smaller than the
 * child index, so nodal P1 data can be prolongated by one forward sweep.
 */
class Mesh {
public:
    Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles)
        : Mesh(std::move(vertices), std::move(triangles), {}, {}, {})
    {
    }

    Mesh(std::vector<Point> vertices,
         std::vector<Triangle> triangles,
         std::vector<int> refinement_edge,
         std::vector<int> generation,
         std::vector<EdgeKey> parents)
        : vertices_(std::move(vertices)),
          triangles_(std::move(triangles)),
          refinement_edge_(std::move(refinement_edge)),
          generation_(std::move(generation)),
          parents_(std::move(parents))
    {
        validate_and_build();
    }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Point>& vertices() const { return vertices_; }
    const Point& vertex(int v) const { return vertices_[v]; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const Triangle& triangle(int t) const { return triangles_[t]; }

    /// Global edges, each as a sorted vertex pair, in first-seen order.
    const std::vector<EdgeKey>& edges() const { return edges_; }
    /// Global edge index of local edge k (opposite local vertex k).
    const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
    /// The one or two triangles sharing edge e (second is no_index on the boundary).
    const std::array<int, 2>& edge_triangles(int e) const { return edge_triangles_[e]; }

    bool is_boundary_edge(int e) const { return edge_triangles_[e][1] == no_index; }
    bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
    const std::vector<char>& boundary_vertex() const { return boundary_vertex_; }
    std::vector<EdgeKey> boundary_edges() const
    {
        std::vector<EdgeKey> out;
        for (int e = 0; e < num_edges(); ++e)
            if (is_boundary_edge(e)) out.push_back(edges_[e]);
        return out;
    }

    int refinement_edge(int t) const { return refinement_edge_[t]; }
    int generation(int t) const { return generation_[t]; }
    /// Endpoints of the edge whose midpoint created v, or {no_index, no_index}.
    const EdgeKey& parents(int v) const { return parents_[v]; }

    /// Triangles incident to vertex v, ascending.
    std::span<const int> vertex_triangles(int v) const
    {
        return {vt_index_.data() + vt_offset_[v],
                static_cast<std::size_t>(vt_offset_[v + 1] - vt_offset_[v])};
    }

    int find_edge(int a, int b) const
    {
        auto it = edge_lookup_.find(detail::pack_edge(a, b));
        return it == edge_lookup_.end() ? no_index : it->second;
    }

    double area(int t) const
    {
        const auto& tri = triangles_[t];
        return detail::signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    }

    double total_area() const
    {
        double s = 0.0;
        for (int t = 0; t < num_triangles(); ++t) s += area(t);
        return s;
    }

    double edge_length(int e) const
    {
        return (vertices_[edges_[e][0]] - vertices_[edges_[e][1]]).norm();
    }

    /// Mesh size h: the maximum edge length.
    double max_edge_length() const
    {
        double h = 0.0;
        for (int e = 0; e < num_edges(); ++e) h = std::max(h, edge_length(e));
        return h;
    }

    /// Smallest interior angle over all triangles, in radians.
    double min_angle() const
    {
        double m = std::numbers::pi;
        for (const auto& tri : triangles_) {
            for (int k = 0; k < 3; ++k) {
                const Point u = vertices_[tri[(k + 1) % 3]] - vertices_[tri[k]];
                const Point w = vertices_[tri[(k + 2) % 3]] - vertices_[tri[k]];
                const double c = u.dot(w) / (u.norm() * w.norm());
                m = std::min(m, std::acos(std::clamp(c, -1.0, 1.0)));
            }
        }
        return m;
    }

private:
    void validate_and_build()
    {
        const int nv = num_vertices();
        const int nt = num_triangles();
        for (int t = 0; t < nt; ++t) {
            for (int v : triangles_[t])
                if (v < 0 || v >= nv)
                    throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                                " references vertex out of range");
            if (!(area(t) > 0.0))
                throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                            " has non-positive signed area");
        }

        if (refinement_edge_.empty()) refinement_edge_ = longest_edge_marking();
        if (generation_.empty()) generation_.assign(nt, 0);
        if (parents_.empty()) parents_.assign(nv, EdgeKey{no_index, no_index});
        if (static_cast<int>(refinement_edge_.size()) != nt ||
            static_cast<int>(generation_.size()) != nt ||
            static_cast<int>(parents_.size()) != nv)
            throw std::invalid_argument("mesh: per-element or per-vertex data has wrong length");

        edge_lookup_.reserve(static_cast<std::size_t>(nt) * 2);
        triangle_edges_.resize(nt);
        for (int t = 0; t < nt; ++t) {
            const auto& tri = triangles_[t];
            for (int k = 0; k < 3; ++k) {
                const int a = tri[(k + 1) % 3];
                const int b = tri[(k + 2) % 3];
                auto [it, inserted] =
                    edge_lookup_.try_emplace(detail::pack_edge(a, b), num_edges());
                if (inserted) {
                    edges_.push_back({std::min(a, b), std::max(a, b)});
                    edge_triangles_.push_back({t, no_index});
                } else {
                    auto& owners = edge_triangles_[it->second];
                    if (owners[1] != no_index)
                        throw std::invalid_argument("mesh: edge shared by more than two triangles");
                    owners[1] = t;
                }
                triangle_edges_[t][k] = it->second;
            }
        }

        boundary_vertex_.assign(nv, 0);
        for (int e = 0; e < num_edges(); ++e)
            if (is_boundary_edge(e)) {
                boundary_vertex_[edges_[e][0]] = 1;
                boundary_vertex_[edges_[e][1]] = 1;
            }

        vt_offset_.assign(nv + 1, 0);
        for (const auto& tri : triangles_)
            for (int v : tri) ++vt_offset_[v + 1];
        for (int v = 0; v < nv; ++v) vt_offset_[v + 1] += vt_offset_[v];
        vt_index_.resize(vt_offset_[nv]);
        std::vector<int> fill(vt_offset_.begin(), vt_offset_.end() - 1);
        for (int t = 0; t < nt; ++t)
            for (int v : triangles_[t]) vt_index_[fill[v]++] = t;
    }

    // Longest edge; ties go to the edge whose opposite vertex has the lowest index.
    std::vector<int> longest_edge_marking() const
    {
        std::vector<int> out(triangles_.size());
        for (std::size_t t = 0; t < triangles_.size(); ++t) {
            const auto& tri = triangles_[t];
            int best = 0;
            double best_len = -1.0;
            for (int k = 0; k < 3; ++k) {
                const double len =
                    (vertices_[tri[(k + 1) % 3]] - vertices_[tri[(k + 2) % 3]]).squaredNorm();
                const bool longer = len > best_len * (1.0 + 1e-12);
                const bool tie = !longer && len >= best_len * (1.0 - 1e-12);
                if (longer || (tie && tri[k] < tri[best])) {
                    best = k;
                    best_len = std::max(len, best_len);
                }
            }
            out[t] = best;
        }
        return out;
    }

    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<int> refinement_edge_;
    std::vector<int> generation_;
    std::vector<EdgeKey> parents_;

    std::vector<EdgeKey> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<std::array<int, 2>> edge_triangles_;
    std::unordered_map<std::uint64_t, int> edge_lookup_;
    std::vector<char> boundary_vertex_;
    std::vector<int> vt_offset_;
    std::vector<int> vt_index_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

// ---------------------------------------------------------------------------
// Generators

/// nx-by-ny grid of the rectangle [x0,x1]x[y0,y1]; every cell split along the
/// diagonal from its lower-left to its upper-right corner.
inline Mesh generate_uniform_rectangle(double x0, double x1, double y0, double y1, int nx, int ny)
{
    if (nx < 1 || ny < 1) throw std::invalid_argument("generate_uniform_rectangle: n must be >= 1");
    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            vertices.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return Mesh(std::move(vertices), std::move(triangles));
}

inline Mesh generate_uniform_square(int n)
{
    if (n < 1) throw std::invalid_argument("generate_uniform_square: n must be >= 1");
    return generate_uniform_rectangle(0.0, 1.0, 0.0, 1.0, n, n);
}

/// L-shaped domain (-1,1)^2 minus [0,1)x(-1,0], n cells per unit length.
inline Mesh generate_lshape(int n)
{
    if (n < 1) throw std::invalid_argument("generate_lshape: n must be >= 1");
    const int m = 2 * n;
    std::vector<int> id(static_cast<std::size_t>(m + 1) * (m + 1), no_index);
    std::vector<Point> vertices;
    auto removed_cell = [n](int i, int j) { return i >= n && j < n; };
    auto keep_vertex = [n](int i, int j) { return !(i > n && j < n); };
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            if (keep_vertex(i, j)) {
                id[j * (m + 1) + i] = static_cast<int>(vertices.size());
                vertices.emplace_back(-1.0 + static_cast<double>(i) / n,
                                      -1.0 + static_cast<double>(j) / n);
            }
    auto at = [&](int i, int j) { return id[j * (m + 1) + i]; };
    std::vector<Triangle> triangles;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            if (removed_cell(i, j)) continue;
            triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    return Mesh(std::move(vertices), std::move(triangles));
}

/**
 * Unit square with n x n cells whose interior vertices are jittered by up
 * to amplitude * (1/n) in each coordinate and whose cell diagonals are
 * chosen at random. Deterministic for a given seed on every platform.
 */
inline Mesh generate_perturbed_square(int n, double amplitude, std::uint64_t seed)
{
    if (n < 1) throw std::invalid_argument("generate_perturbed_square: n must be >= 1");
    if (!(amplitude >= 0.0 && amplitude < 0.25))
        throw std::invalid_argument("generate_perturbed_square: amplitude must lie in [0, 0.25)");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double h = 1.0 / n;
    std::vector<Point> vertices;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            Point p(i * h, j * h);
            if (i > 0 && i < n && j > 0 && j < n) {
                const double dx = (2.0 * uniform() - 1.0) * amplitude * h;
                const double dy = (2.0 * uniform() - 1.0) * amplitude * h;
                p += Point(dx, dy);
            }
            vertices.push_back(p);
        }
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<Triangle> triangles;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (rng() & 1u) {
                triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
                triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
            } else {
                triangles.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
                triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
            }
        }
    return Mesh(std::move(vertices), std::move(triangles));
}

// ---------------------------------------------------------------------------
// Refinement

/// Red refinement: every triangle split into four similar children through its
/// edge midpoints. Old vertices keep their indices; the midpoint of global edge
/// e becomes vertex V + e.
inline Mesh regular_refine(const Mesh& mesh)
{
    const int nv = mesh.num_vertices();
    std::vector<Point> vertices = mesh.vertices();
    std::vector<EdgeKey> parents;
    parents.reserve(static_cast<std::size_t>(nv + mesh.num_edges()));
    for (int v = 0; v < nv; ++v) parents.push_back(mesh.parents(v));
    for (const auto& e : mesh.edges()) {
        vertices.push_back(0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1])));
        parents.push_back(e);
    }

    std::vector<Triangle> triangles;
    std::vector<int> refinement, generation;
    triangles.reserve(static_cast<std::size_t>(4) * mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto [a, b, c] = mesh.triangle(t);
        const auto& te = mesh.triangle_edges(t);
        const int ma = nv + te[0], mb = nv + te[1], mc = nv + te[2];
        // Each child is a scaled copy of the parent with the same local vertex
        // correspondence, so it inherits the parent's refinement edge.
        triangles.push_back({a, mc, mb});
        triangles.push_back({mc, b, ma});
        triangles.push_back({mb, ma, c});
        triangles.push_back({ma, mb, mc});
        for (int k = 0; k < 4; ++k) {
            refinement.push_back(mesh.refinement_edge(t));
            generation.push_back(mesh.generation(t) + 1);
        }
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(refinement),
                std::move(generation), std::move(parents));
}

inline Mesh regular_refine(const Mesh& mesh, int times)
{
    Mesh out = mesh;
    for (int k = 0; k < times; ++k) out = regular_refine(out);
    return out;
}

/**
 * Newest-vertex bisection of the marked triangles plus the completion needed
 * for conformity.
 *
 * An edge is bisected iff it is marked. Marking is closed under the rule
 * "if any edge of T is marked, so is the refinement edge of T", which
 * makes the recursive bisection below conforming.
 */
inline Mesh bisect(const Mesh& mesh, std::span<const int> marked)
{
    if (marked.empty()) return mesh;

    const int ne = mesh.num_edges();
    std::vector<char> edge_marked(ne, 0);
    std::vector<int> work;
    auto ref_edge = [&](int t) { return mesh.triangle_edges(t)[mesh.refinement_edge(t)]; };
    auto mark = [&](int e) {
        if (!edge_marked[e]) {
            edge_marked[e] = 1;
            work.push_back(e);
        }
    };
    for (int t : marked) {
        if (t < 0 || t >= mesh.num_triangles())
            throw std::invalid_argument("bisect: marked triangle index out of range");
        mark(ref_edge(t));
    }
    while (!work.empty()) {
        const int e = work.back();
        work.pop_back();
        for (int t : mesh.edge_triangles(e))
            if (t != no_index) mark(ref_edge(t));
    }

    std::vector<Point> vertices = mesh.vertices();
    std::vector<EdgeKey> parents;
    for (int v = 0; v < mesh.num_vertices(); ++v) parents.push_back(mesh.parents(v));
    std::unordered_map<std::uint64_t, int> midpoint;
    for (int e = 0; e < ne; ++e) {
        if (!edge_marked[e]) continue;
        const auto& key = mesh.edges()[e];
        midpoint.emplace(detail::pack_edge(key[0], key[1]), static_cast<int>(vertices.size()));
        vertices.push_back(0.5 * (mesh.vertex(key[0]) + mesh.vertex(key[1])));
        parents.push_back(key);
    }

    std::vector<Triangle> triangles;
    std::vector<int> refinement, generation;
    triangles.reserve(static_cast<std::size_t>(mesh.num_triangles()) + 2 * midpoint.size());

    // Rotated so that the newest vertex comes first: (n, p, q), refinement edge p-q.
    auto split = [&](auto&& self, int n, int p, int q, int gen) -> void {
        auto it = midpoint.find(detail::pack_edge(p, q));
        if (it == midpoint.end()) {
            triangles.push_back({n, p, q});
            refinement.push_back(0);
            generation.push_back(gen);
            return;
        }
        const int m = it->second;
        self(self, m, n, p, gen + 1);
        self(self, m, q, n, gen + 1);
    };
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        const int k = mesh.refinement_edge(t);
        split(split, tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3], mesh.generation(t));
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(refinement),
                std::move(generation), std::move(parents));
}

inline Mesh bisect(const Mesh& mesh, const std::vector<int>& marked)
{
    return bisect(mesh, std::span<const int>(marked));
}

// ---------------------------------------------------------------------------
// Audits and transfer

/// Edge-incidence audit: no edge is shared by more than two triangles (enforced
/// at construction) and no vertex lies in the interior of a boundary edge
/// (which would be a hanging node).
inline bool is_conforming(const Mesh& mesh)
{
    std::vector<int> bverts;
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (mesh.is_boundary_vertex(v)) bverts.push_back(v);
    const double h = mesh.max_edge_length();
    for (const auto& e : mesh.boundary_edges()) {
        const Point& a = mesh.vertex(e[0]);
        const Point& b = mesh.vertex(e[1]);
        const Point d = b - a;
        const double len2 = d.squaredNorm();
        for (int v : bverts) {
            if (v == e[0] || v == e[1]) continue;
            const Point w = mesh.vertex(v) - a;
            const double s = w.dot(d) / len2;
            if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
            const double dist = std::abs(d.x() * w.y() - d.y() * w.x()) / std::sqrt(len2);
            if (dist < 1e-12 * h) return false;
        }
    }
    return true;
}

/// True if `fine` was produced from `coarse` by refinements that keep the
/// coarse vertices as a prefix and record parents for every new vertex.
inline bool is_descendant(const Mesh& fine, const Mesh& coarse)
{
    if (fine.num_vertices() < coarse.num_vertices()) return false;
    for (int v = 0; v < coarse.num_vertices(); ++v)
        if (fine.vertex(v) != coarse.vertex(v)) return false;
    for (int v = coarse.num_vertices(); v < fine.num_vertices(); ++v)
        if (fine.parents(v)[0] == no_index) return false;
    return true;
}

/**
 * Uniform bucket grid over triangle bounding boxes for point location.
 */
class PointLocator {
public:
    explicit PointLocator(const Mesh& mesh) : mesh_(&mesh)
    {
        lo_ = hi_ = mesh.vertex(0);
        for (const auto& p : mesh.vertices()) {
            lo_ = lo_.cwiseMin(p);
            hi_ = hi_.cwiseMax(p);
        }
        const double span = std::max(hi_.x() - lo_.x(), hi_.y() - lo_.y());
        n_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_triangles()) / 2.0)));
        cell_ = span / n_ * (1.0 + 1e-12);
        nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / cell_)));
        ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / cell_)));
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            Point a = mesh.vertex(mesh.triangle(t)[0]), b = a;
            for (int v : mesh.triangle(t)) {
                a = a.cwiseMin(mesh.vertex(v));
                b = b.cwiseMax(mesh.vertex(v));
            }
            const auto [i0, j0] = cell_of(a);
            const auto [i1, j1] = cell_of(b);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) buckets_[j * nx_ + i].push_back(t);
        }
    }

    /// Containing triangle and barycentric coordinates, or triangle no_index.
    std::pair<int, Eigen::Vector3d> locate(const Point& p, double tol = 1e-10) const
    {
        const auto [i, j] = cell_of(p);
        for (int t : buckets_[j * nx_ + i]) {
            const auto& tri = mesh_->triangle(t);
            const Point& a = mesh_->vertex(tri[0]);
            const Point& b = mesh_->vertex(tri[1]);
            const Point& c = mesh_->vertex(tri[2]);
            const double area = detail::signed_area(a, b, c);
            Eigen::Vector3d bary(detail::signed_area(p, b, c) / area,
                                 detail::signed_area(a, p, c) / area,
                                 detail::signed_area(a, b, p) / area);
            if (bary.minCoeff() >= -tol) return {t, bary};
        }
        return {no_index, Eigen::Vector3d::Zero()};
    }

private:
    std::pair<int, int> cell_of(const Point& p) const
    {
        const int i = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_), 0, ny_ - 1);
        return {i, j};
    }

    const Mesh* mesh_;
    Point lo_, hi_;
    int n_ = 1, nx_ = 1, ny_ = 1;
    double cell_ = 1.0;
    std::vector<std::vector<int>> buckets_;
};

/// Nodal values of a coarse P1 function at the vertices of a nested fine mesh.
inline Eigen::VectorXd prolongate_p1(const Mesh& coarse, const Eigen::VectorXd& values, const Mesh& fine)
{
    if (values.size() != coarse.num_vertices())
        throw std::invalid_argument("prolongate_p1: value vector has wrong length");
    Eigen::VectorXd out(fine.num_vertices());
    if (is_descendant(fine, coarse)) {
        out.head(coarse.num_vertices()) = values;
        for (int v = coarse.num_vertices(); v < fine.num_vertices(); ++v) {
            const auto& p = fine.parents(v);
            out[v] = 0.5 * (out[p[0]] + out[p[1]]);
        }
        return out;
    }
    const PointLocator locator(coarse);
    for (int v = 0; v < fine.num_vertices(); ++v) {
        const auto [t, bary] = locator.locate(fine.vertex(v));
        if (t == no_index)
            throw std::invalid_argument("prolongate_p1: fine vertex outside the coarse mesh");
        const auto& tri = coarse.triangle(t);
        out[v] = bary[0] * values[tri[0]] + bary[1] * values[tri[1]] + bary[2] * values[tri[2]];
    }
    return out;
}

} // namespace ppreig
