#pragma once

// Two-file plain-text mesh format.
//
//   <prefix>.node   count, then "index x y boundary_flag" per vertex
//   <prefix>.ele    count, then "index v0 v1 v2" per triangle
//
// Indices are 0-based, fields whitespace-separated, lines end in LF.

#include "mesh.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ppreig {

inline void write_nodes(std::ostream& os, const Mesh& mesh)
{
    os << mesh.num_vertices() << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int v = 0; v < mesh.num_vertices(); ++v)
        os << v << ' ' << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << ' '
           << (mesh.is_boundary_vertex(v) ? 1 : 0) << '\n';
}

inline void write_elements(std::ostream& os, const Mesh& mesh)
{
    os << mesh.num_triangles() << '\n';
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        os << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    }
}

/// Reads a node/element pair. Boundary flags must agree with the topology.
inline Mesh read_mesh(std::istream& nodes, std::istream& elements)
{
    auto fail = [](const std::string& msg) { throw std::runtime_error("read_mesh: " + msg); };
    long long nv = 0, nt = 0;
    if (!(nodes >> nv) || nv < 0) fail("bad vertex count");
    std::vector<Point> vertices(static_cast<std::size_t>(nv));
    std::vector<int> flags(static_cast<std::size_t>(nv), -1);
    for (long long i = 0; i < nv; ++i) {
        long long idx = 0;
        double x = 0.0, y = 0.0;
        int flag = 0;
        if (!(nodes >> idx >> x >> y >> flag)) fail("truncated node file");
        if (idx < 0 || idx >= nv || flags[idx] != -1) fail("bad or duplicate node index " + std::to_string(idx));
        vertices[idx] = Point(x, y);
        flags[idx] = flag != 0;
    }
    if (!(elements >> nt) || nt < 0) fail("bad element count");
    std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
    std::vector<char> seen(static_cast<std::size_t>(nt), 0);
    for (long long i = 0; i < nt; ++i) {
        long long idx = 0;
        Triangle tri{};
        if (!(elements >> idx >> tri[0] >> tri[1] >> tri[2])) fail("truncated element file");
        if (idx < 0 || idx >= nt || seen[idx]) fail("bad or duplicate element index " + std::to_string(idx));
        seen[idx] = 1;
        triangles[idx] = tri;
    }
    Mesh mesh(std::move(vertices), std::move(triangles));
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if ((flags[v] != 0) != mesh.is_boundary_vertex(v))
            fail("boundary flag of vertex " + std::to_string(v) + " disagrees with the topology");
    return mesh;
}

inline void save_mesh(const Mesh& mesh, const std::string& prefix)
{
    std::ofstream nodes(prefix + ".node", std::ios::binary);
    std::ofstream elements(prefix + ".ele", std::ios::binary);
    if (!nodes || !elements) throw std::runtime_error("save_mesh: cannot open " + prefix + ".node/.ele");
    write_nodes(nodes, mesh);
    write_elements(elements, mesh);
}

inline Mesh load_mesh(const std::string& prefix)
{
    std::ifstream nodes(prefix + ".node");
    std::ifstream elements(prefix + ".ele");
    if (!nodes || !elements) throw std::runtime_error("load_mesh: cannot open " + prefix + ".node/.ele");
    return read_mesh(nodes, elements);
}

} // namespace ppreig
