#include "support.hpp"

#include <ppreig/mesh.hpp>
#include <ppreig/mesh_io.hpp>
#include <ppreig/patch.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace ppreig;
using testing_support::Rng;

namespace {

std::set<std::pair<long long, long long>> vertex_set(const Mesh& m, double scale)
{
    std::set<std::pair<long long, long long>> out;
    for (const auto& p : m.vertices()) out.emplace(std::llround(p.x() * scale), std::llround(p.y() * scale));
    return out;
}

std::vector<int> all_triangles(const Mesh& m)
{
    std::vector<int> all(static_cast<std::size_t>(m.num_triangles()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

// Independent incidence count: every interior edge in exactly two triangles,
// boundary edges in one, boundary vertices exactly those on boundary edges.
void audit(const Mesh& m)
{
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : m.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
        EXPECT_GT(detail::signed_area(m.vertex(t[0]), m.vertex(t[1]), m.vertex(t[2])), 0.0);
    }
    std::vector<char> on_boundary(m.num_vertices(), 0);
    for (const auto& [edge, c] : count) {
        ASSERT_LE(c, 2);
        if (c == 1) on_boundary[edge.first] = on_boundary[edge.second] = 1;
    }
    for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(on_boundary[v] != 0, m.is_boundary_vertex(v));
    EXPECT_TRUE(is_conforming(m));
}

} // namespace

TEST(Generate, MinimalSquare)
{
    const Mesh m = generate_uniform_square(1);
    EXPECT_EQ(m.num_triangles(), 2);
    EXPECT_EQ(m.num_vertices(), 4);
}

TEST(Generate, SquareCountsAndSpacing)
{
    const Mesh m = generate_uniform_square(16);
    EXPECT_EQ(m.num_triangles(), 2 * 16 * 16);
    EXPECT_EQ(m.num_vertices(), 17 * 17);
    for (int e = 0; e < m.num_edges(); ++e) {
        const Point d = m.vertex(m.edges()[e][1]) - m.vertex(m.edges()[e][0]);
        if (d.x() == 0.0 || d.y() == 0.0) { EXPECT_NEAR(m.edge_length(e), 1.0 / 16, 1e-15); }
    }
    audit(m);
}

TEST(Generate, SquareDiagonalsShareDirection)
{
    const Mesh m = generate_uniform_square(5);
    for (int e = 0; e < m.num_edges(); ++e) {
        const Point d = m.vertex(m.edges()[e][1]) - m.vertex(m.edges()[e][0]);
        if (d.x() != 0.0 && d.y() != 0.0) { EXPECT_GT(d.x() * d.y(), 0.0); }
    }
}

TEST(Generate, SquareArea)
{
    EXPECT_NEAR(generate_uniform_square(4).total_area(), 1.0, 1e-14);
}

TEST(Generate, RejectsZero)
{
    EXPECT_THROW(generate_uniform_square(0), std::invalid_argument);
    EXPECT_THROW(generate_lshape(0), std::invalid_argument);
}

TEST(Generate, CoarsestLShape)
{
    const Mesh m = generate_lshape(1);
    EXPECT_EQ(m.num_triangles(), 6);
    EXPECT_NEAR(m.total_area(), 3.0, 1e-13);
}

TEST(Generate, LShapeReentrantEdges)
{
    const Mesh m = generate_lshape(2);
    audit(m);
    int origin = 0, reentrant = 0;
    for (int v = 0; v < m.num_vertices(); ++v) {
        const Point& p = m.vertex(v);
        if (p.norm() == 0.0) ++origin;
        const bool on = (p.x() == 0.0 && p.y() <= 0.0) || (p.y() == 0.0 && p.x() >= 0.0);
        if (on) {
            EXPECT_TRUE(m.is_boundary_vertex(v));
            ++reentrant;
        }
    }
    EXPECT_EQ(origin, 1);
    // Two edges of length 1 with 2 cells each, the corner counted once.
    EXPECT_EQ(reentrant, 5);
}

TEST(Generate, LShapeAvoidsRemovedQuadrant)
{
    for (int n = 1; n <= 6; ++n) {
        const Mesh m = generate_lshape(n);
        EXPECT_NEAR(m.total_area(), 3.0, 1e-13);
        for (int t = 0; t < m.num_triangles(); ++t) {
            const auto& tri = m.triangle(t);
            const Point c = (m.vertex(tri[0]) + m.vertex(tri[1]) + m.vertex(tri[2])) / 3.0;
            EXPECT_FALSE(c.x() > 0.0 && c.y() < 0.0);
        }
    }
}

TEST(Generate, PerturbedSquareIsDeterministic)
{
    const Mesh a = generate_perturbed_square(6, 0.2, 7);
    const Mesh b = generate_perturbed_square(6, 0.2, 7);
    ASSERT_EQ(a.num_vertices(), b.num_vertices());
    for (int v = 0; v < a.num_vertices(); ++v) EXPECT_EQ(a.vertex(v), b.vertex(v));
    EXPECT_EQ(a.triangles(), b.triangles());
    EXPECT_NEAR(a.total_area(), 1.0, 1e-14);
    audit(a);
}

TEST(Construct, RejectsInvalidTriangles)
{
    const std::vector<Point> p{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    EXPECT_THROW(Mesh(p, {{0, 2, 1}}), std::invalid_argument);
    EXPECT_THROW(Mesh(p, {{0, 1, 7}}), std::invalid_argument);
    EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), std::invalid_argument);
}

TEST(Construct, RefinementEdgeIsLongest)
{
    const Mesh m = generate_uniform_square(3);
    for (int t = 0; t < m.num_triangles(); ++t) {
        const int e = m.triangle_edges(t)[m.refinement_edge(t)];
        for (int k = 0; k < 3; ++k) EXPECT_GE(m.edge_length(e), m.edge_length(m.triangle_edges(t)[k]) - 1e-15);
    }
}

TEST(RegularRefine, MatchesFinerGrid)
{
    const Mesh r = regular_refine(generate_uniform_square(4));
    const Mesh g = generate_uniform_square(8);
    EXPECT_EQ(vertex_set(r, 64.0), vertex_set(g, 64.0));
    EXPECT_EQ(r.num_triangles(), g.num_triangles());
}

TEST(RegularRefine, UnitSquareOnce)
{
    const Mesh r = regular_refine(generate_uniform_square(1));
    EXPECT_EQ(r.num_triangles(), 8);
    EXPECT_EQ(r.num_vertices(), 9);
}

TEST(RegularRefine, ChildrenAreQuarterSizedAndSimilar)
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Mesh m = testing_support::random_mesh(rng);
        const Mesh r = regular_refine(m);
        ASSERT_EQ(r.num_triangles(), 4 * m.num_triangles());
        for (int t = 0; t < m.num_triangles(); ++t)
            for (int k = 0; k < 4; ++k) {
                EXPECT_NEAR(r.area(4 * t + k), m.area(t) / 4.0, 1e-14);
                EXPECT_EQ(r.generation(4 * t + k), m.generation(t) + 1);
            }
        EXPECT_NEAR(r.min_angle(), m.min_angle(), 1e-12);
    }
}

TEST(RegularRefine, VertexCountAndConformity)
{
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const Mesh m = testing_support::random_mesh(rng);
        const Mesh r = regular_refine(m);
        EXPECT_EQ(r.num_vertices(), m.num_vertices() + m.num_edges());
        audit(r);
        EXPECT_TRUE(is_descendant(r, m));
    }
}

TEST(Bisect, EmptyMarkingIsIdentity)
{
    const Mesh m = generate_lshape(2);
    const Mesh b = bisect(m, std::vector<int>{});
    EXPECT_EQ(b.triangles(), m.triangles());
    EXPECT_EQ(b.vertices(), m.vertices());
}

TEST(Bisect, SingleTriangleOfUnitSquare)
{
    const Mesh m = generate_uniform_square(1);
    const Mesh b = bisect(m, std::vector<int>{0});
    EXPECT_GE(b.num_triangles(), m.num_triangles() + 2);
    audit(b);
}

TEST(Bisect, TwiceEverywhereQuadruples)
{
    // Holds for the generated meshes, whose diagonals give matching refinement edges.
    std::vector<Mesh> meshes;
    for (int n : {1, 2, 5, 8}) {
        meshes.push_back(generate_uniform_square(n));
        meshes.push_back(generate_lshape(n));
    }
    meshes.push_back(generate_uniform_rectangle(-5, 5, -5, 5, 10, 10));
    meshes.push_back(regular_refine(generate_lshape(2), 1));
    for (const Mesh& m : meshes) {
        const Mesh once = bisect(m, all_triangles(m));
        const Mesh twice = bisect(once, all_triangles(once));
        EXPECT_EQ(once.num_triangles(), 2 * m.num_triangles());
        EXPECT_EQ(twice.num_triangles(), 4 * m.num_triangles());
        audit(twice);
    }
}

TEST(Bisect, MarkedTrianglesAreSplitAndConformityHolds)
{
    Rng rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const Mesh m = testing_support::random_mesh(rng);
        std::vector<int> marked;
        for (int t = 0; t < m.num_triangles(); ++t)
            if (rng.uniform() < 0.2) marked.push_back(t);
        if (marked.empty()) marked.push_back(0);
        const Mesh b = bisect(m, marked);
        audit(b);
        EXPECT_TRUE(is_descendant(b, m));
        EXPECT_NEAR(b.total_area(), m.total_area(), 1e-12);
        std::set<std::array<int, 3>> survivors;
        for (auto t : b.triangles()) {
            std::sort(t.begin(), t.end());
            survivors.insert(t);
        }
        for (int t : marked) {
            auto tri = m.triangle(t);
            std::sort(tri.begin(), tri.end());
            EXPECT_EQ(survivors.count(tri), 0u);
        }
    }
}

TEST(Bisect, MinimumAngleStaysBounded)
{
    Rng rng(15);
    for (int trial = 0; trial < 5; ++trial) {
        Mesh m = generate_perturbed_square(3, 0.15, rng.raw());
        const double initial = m.min_angle();
        for (int level = 0; level < 12; ++level) {
            std::vector<int> marked;
            for (int t = 0; t < m.num_triangles(); ++t)
                if (rng.uniform() < 0.25) marked.push_back(t);
            m = bisect(m, marked);
        }
        EXPECT_GE(m.min_angle(), 0.25 * initial);
    }
}

TEST(Bisect, RightTrianglesStaySimilar)
{
    Mesh m = generate_uniform_square(2);
    for (int level = 0; level < 8; ++level) m = bisect(m, std::vector<int>{0, m.num_triangles() - 1});
    EXPECT_NEAR(m.min_angle(), std::numbers::pi / 4.0, 1e-12);
}

TEST(Patch, InteriorVertexUsesOneRing)
{
    const Mesh m = generate_uniform_square(8);
    const int z = 4 * 9 + 4;
    ASSERT_EQ(m.vertex(z), Point(0.5, 0.5));
    const Patch p = build_patch(m, z);
    EXPECT_EQ(p.sample_vertices.size(), 7u);
    EXPECT_EQ(p.elements.size(), 6u);
}

TEST(Patch, CornerVertexGrows)
{
    const Mesh m = generate_uniform_square(2);
    const Patch p = build_patch(m, 0);
    EXPECT_GE(p.sample_vertices.size(), 6u);
    EXPECT_GT(p.elements.size(), m.vertex_triangles(0).size());
}

TEST(Patch, TooSmallMeshFails)
{
    EXPECT_THROW(build_patch(generate_uniform_square(1), 0), std::invalid_argument);
}

TEST(Patch, InvariantsOnRandomMeshes)
{
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        const Mesh m = testing_support::random_mesh(rng);
        for (int z = 0; z < m.num_vertices(); ++z) {
            const Patch p = build_patch(m, z);
            EXPECT_GE(p.sample_vertices.size(), 6u);
            EXPECT_TRUE(std::binary_search(p.sample_vertices.begin(), p.sample_vertices.end(), z));
            EXPECT_TRUE(std::adjacent_find(p.sample_vertices.begin(), p.sample_vertices.end()) ==
                        p.sample_vertices.end());
            const double s = patch_scale(m, z, p.sample_vertices);
            EXPECT_GE(smallest_singular_value(fitting_matrix(m, z, p.sample_vertices, s)), patch_rank_tolerance);
        }
    }
}

TEST(Transfer, ProlongationIsExactForLinears)
{
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Mesh coarse = testing_support::random_mesh(rng);
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1);
        auto f = [&](const Point& p) { return a + b * p.x() + c * p.y(); };
        Eigen::VectorXd values(coarse.num_vertices());
        for (int v = 0; v < coarse.num_vertices(); ++v) values[v] = f(coarse.vertex(v));
        const Mesh fine = bisect(regular_refine(coarse), std::vector<int>{0, 1});
        const Eigen::VectorXd pf = prolongate_p1(coarse, values, fine);
        for (int v = 0; v < fine.num_vertices(); ++v) EXPECT_NEAR(pf[v], f(fine.vertex(v)), 1e-13);
    }
}

TEST(Transfer, LocatorFindsPoints)
{
    const Mesh m = generate_lshape(3);
    const PointLocator loc(m);
    Rng rng(18);
    for (int k = 0; k < 200; ++k) {
        const int t = rng.integer(0, m.num_triangles() - 1);
        double l0 = rng.uniform(), l1 = rng.uniform() * (1 - l0);
        const Eigen::Vector3d bary(l0, l1, 1 - l0 - l1);
        const auto& tri = m.triangle(t);
        const Point p = bary[0] * m.vertex(tri[0]) + bary[1] * m.vertex(tri[1]) + bary[2] * m.vertex(tri[2]);
        const auto [found, lam] = loc.locate(p);
        ASSERT_NE(found, no_index);
        const auto& ft = m.triangle(found);
        const Point q = lam[0] * m.vertex(ft[0]) + lam[1] * m.vertex(ft[1]) + lam[2] * m.vertex(ft[2]);
        EXPECT_NEAR((p - q).norm(), 0.0, 1e-13);
    }
}

TEST(MeshIo, RoundTrip)
{
    Rng rng(19);
    for (int trial = 0; trial < 5; ++trial) {
        const Mesh m = testing_support::random_mesh(rng);
        std::stringstream nodes, elements;
        write_nodes(nodes, m);
        write_elements(elements, m);
        const Mesh r = read_mesh(nodes, elements);
        EXPECT_EQ(r.vertices(), m.vertices());
        EXPECT_EQ(r.triangles(), m.triangles());
    }
}

TEST(MeshIo, FormatLayout)
{
    std::stringstream nodes, elements;
    const Mesh m = generate_uniform_square(1);
    write_nodes(nodes, m);
    write_elements(elements, m);
    EXPECT_EQ(nodes.str(), "4\n0 0 0 1\n1 1 0 1\n2 0 1 1\n3 1 1 1\n");
    EXPECT_EQ(elements.str(), "2\n0 0 1 3\n1 0 3 2\n");
}

TEST(MeshIo, RejectsBadInput)
{
    {
        std::stringstream n("4\n0 0 0 1\n1 1 0 1\n2 0 1 0\n3 1 1 1\n"), e("2\n0 0 1 3\n1 0 3 2\n");
        EXPECT_THROW(read_mesh(n, e), std::runtime_error);
    }
    {
        std::stringstream n("4\n0 0 0 1\n1 1 0 1\n"), e("2\n0 0 1 3\n1 0 3 2\n");
        EXPECT_THROW(read_mesh(n, e), std::runtime_error);
    }
}
