#include "support.hpp"

#include <ppreig/assembly.hpp>
#include <ppreig/eigensolver.hpp>
#include <ppreig/ppr.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ppreig;
using testing_support::Rng;

namespace {

SpacePtr p1(Mesh m) { return make_space(std::make_shared<const Mesh>(std::move(m)), 1); }

const double pi = std::numbers::pi;

ExactFunction sine()
{
    return {[](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); },
            [](const Point& p) {
                return Vec2(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                            pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
            }};
}

} // namespace

TEST(Recover, ReproducesQuadraticsOnAnyMesh)
{
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const auto space = p1(testing_support::random_mesh(rng));
        const auto q = testing_support::random_quadratic(rng);
        const RecoveredGradient g = recover(interpolate(space, q));
        for (int v = 0; v < space->mesh().num_vertices(); ++v) {
            const Vec2 exact = q.gradient(space->mesh().vertex(v));
            EXPECT_LE(std::abs(g.gx[v] - exact.x()), 1e-11) << "trial " << trial << " vertex " << v;
            EXPECT_LE(std::abs(g.gy[v] - exact.y()), 1e-11) << "trial " << trial << " vertex " << v;
        }
    }
}

TEST(Recover, IsLinear)
{
    Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const auto space = p1(testing_support::random_mesh(rng));
        Vector u(space->num_dofs()), v(space->num_dofs());
        for (int i = 0; i < u.size(); ++i) {
            u[i] = rng.uniform(-1, 1);
            v[i] = rng.uniform(-1, 1);
        }
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        const RecoveredGradient gu = recover(FeFunction(space, u));
        const RecoveredGradient gv = recover(FeFunction(space, v));
        const RecoveredGradient gw = recover(FeFunction(space, a * u + b * v));
        EXPECT_LE((gw.gx - (a * gu.gx + b * gv.gx)).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, gw.gx.cwiseAbs().maxCoeff()));
        EXPECT_LE((gw.gy - (a * gu.gy + b * gv.gy)).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, gw.gy.cwiseAbs().maxCoeff()));
    }
}

TEST(Recover, OperatorMatchesDirectRecovery)
{
    const auto space = p1(generate_perturbed_square(6, 0.2, 5));
    const RecoveryOperator op(space->mesh());
    const FeFunction u = interpolate(space, sine().value);
    const RecoveredGradient a = op.apply(u), b = recover(u);
    EXPECT_EQ(a.gx, b.gx);
    EXPECT_EQ(a.gy, b.gy);
    // Constants are annihilated row by row.
    EXPECT_LE((op.x_weights() * Vector::Ones(space->num_dofs())).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Recover, Bounded)
{
    Rng rng(33);
    for (int trial = 0; trial < 15; ++trial) {
        const auto space = p1(testing_support::random_mesh(rng));
        Vector v(space->num_dofs());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
        const FeFunction u(space, v);
        const double grad = norms(u, Coefficients::laplace()).gradient;
        EXPECT_LE(recovered_l2_norm(recover(u)), 10.0 * grad);
    }
}

TEST(Recover, SuperconvergentInterpolantRate)
{
    auto error = [](int n) {
        const auto space = p1(regular_refine(generate_uniform_square(4), n));
        return recovered_gradient_error(recover(interpolate(space, sine().value)), sine().gradient,
                                        Coefficients::laplace());
    };
    const double ratio = error(3) / error(4);
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST(Recover, RejectsQuadraticSpace)
{
    const auto space = make_space(std::make_shared<const Mesh>(generate_uniform_square(4)), 2);
    EXPECT_THROW(recover(FeFunction(space, Vector::Zero(space->num_dofs()))), std::invalid_argument);
}

TEST(Estimate, VanishesForLinears)
{
    Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const auto space = p1(testing_support::random_mesh(rng));
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        const FeFunction u = interpolate(space, [&](const Point& p) { return 1.0 + a * p.x() + b * p.y(); });
        const EstimatorField eta = estimate(u, recover(u), Coefficients::laplace());
        for (double e : eta.local) EXPECT_LE(e, 1e-12);
    }
}

TEST(Estimate, GlobalIsRootSumOfSquares)
{
    const auto space = p1(generate_lshape(4));
    const FeFunction u = interpolate(space, [](const Point& p) { return std::exp(p.x()) * std::cos(2 * p.y()); });
    const EstimatorField eta = estimate(u, recover(u), Coefficients::laplace());
    double s = 0.0;
    for (double e : eta.local) {
        EXPECT_GE(e, 0.0);
        s += e * e;
    }
    EXPECT_NEAR(eta.global_squared(), s, 1e-12 * s);
}

TEST(Estimate, DiffusionScaling)
{
    const auto space = p1(generate_uniform_rectangle(-5, 5, -5, 5, 10, 10));
    const FeFunction u = interpolate(space, [](const Point& p) { return std::exp(-0.5 * p.squaredNorm()); });
    const RecoveredGradient g = recover(u);
    const double unit = estimate(u, g, Coefficients::laplace()).global;
    const double half = estimate(u, g, Coefficients::scaled_laplace(0.5)).global;
    EXPECT_NEAR(half, unit / std::sqrt(2.0), 1e-12 * unit);
    const double oscillator = estimate(u, g, Coefficients::harmonic_oscillator()).global;
    EXPECT_NEAR(oscillator, unit / std::sqrt(2.0), 1e-10 * unit);
}

TEST(Estimate, AsymptoticallyExactOnEigenfunction)
{
    const auto space = p1(generate_uniform_square(64));
    const auto ops = assemble_reduced(*space, Coefficients::laplace());
    const auto pair = eigs_smallest(ops.stiffness, ops.mass, 1)[0];
    const FeFunction uh(space, space->extend_from_free(pair.vector));
    // Discrete and exact eigenfunctions both at unit L2 norm.
    const ExactFunction u = sine().scaled(inner_product(uh, sine().value) < 0 ? -2.0 : 2.0);
    const double eta = estimate(uh, recover(uh), Coefficients::laplace()).global;
    const double err = norms(uh, u, Coefficients::laplace()).gradient;
    EXPECT_NEAR(eta / err, 1.0, 0.1);
}

TEST(Enhance, Formula)
{
    EXPECT_EQ(enhance_eigenvalue(20.0, 0.0, 1.0), 20.0);
    EXPECT_DOUBLE_EQ(enhance_eigenvalue(20.0, 0.5, 2.0), 20.0 - 0.125);
    EXPECT_THROW(enhance_eigenvalue(20.0, 0.5, 0.0), std::invalid_argument);
    EXPECT_THROW(enhance_eigenvalue(20.0, 0.5, -1.0), std::invalid_argument);
}
