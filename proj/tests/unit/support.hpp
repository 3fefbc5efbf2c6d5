#pragma once

// Hand-rolled generators for property tests.

#include <ppreig/mesh.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using ppreig::Mesh;
using ppreig::Point;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Perturbed squares, L-shapes and locally bisected variants of both.
inline Mesh random_mesh(Rng& rng)
{
    Mesh mesh = [&] {
        switch (rng.integer(0, 2)) {
        case 0: return ppreig::generate_perturbed_square(rng.integer(2, 6), rng.uniform(0.0, 0.2), rng.raw());
        case 1: return ppreig::generate_lshape(rng.integer(1, 3));
        default: return ppreig::generate_uniform_rectangle(-1.0, 2.0, 0.0, 1.5, rng.integer(2, 5), rng.integer(2, 5));
        }
    }();
    const int rounds = rng.integer(0, 3);
    for (int r = 0; r < rounds; ++r) {
        std::vector<int> marked;
        for (int t = 0; t < mesh.num_triangles(); ++t)
            if (rng.uniform() < 0.3) marked.push_back(t);
        mesh = ppreig::bisect(mesh, marked);
    }
    return mesh;
}

/// q(x, y) = c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2
struct Quadratic {
    Eigen::Matrix<double, 6, 1> c;

    double operator()(const Point& p) const
    {
        const double x = p.x(), y = p.y();
        return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    }
    Eigen::Vector2d gradient(const Point& p) const
    {
        return {c[1] + 2.0 * c[3] * p.x() + c[4] * p.y(), c[2] + c[4] * p.x() + 2.0 * c[5] * p.y()};
    }
};

inline Quadratic random_quadratic(Rng& rng)
{
    Quadratic q;
    for (int i = 0; i < 6; ++i) q.c[i] = rng.uniform(-2.0, 2.0);
    return q;
}

} // namespace testing_support
