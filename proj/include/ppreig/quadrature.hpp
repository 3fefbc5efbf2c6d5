#pragma once

// Symmetric quadrature rules on triangles, in barycentric coordinates.
// Weights sum to one; multiply by the element area.

#include <Eigen/Core>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace ppreig {

struct QuadraturePoint {
    Eigen::Vector3d bary;
    double weight;
};

class QuadratureRule {
public:
    QuadratureRule(int degree, std::vector<QuadraturePoint> points)
        : degree_(degree), points_(std::move(points))
    {
    }

    int degree() const { return degree_; }
    std::span<const QuadraturePoint> points() const { return points_; }

private:
    int degree_;
    std::vector<QuadraturePoint> points_;
};

namespace detail {

inline void push_orbit3(std::vector<QuadraturePoint>& out, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    out.push_back({{b, a, a}, w});
    out.push_back({{a, b, a}, w});
    out.push_back({{a, a, b}, w});
}

inline void push_orbit6(std::vector<QuadraturePoint>& out, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    out.push_back({{a, b, c}, w});
    out.push_back({{a, c, b}, w});
    out.push_back({{b, a, c}, w});
    out.push_back({{b, c, a}, w});
    out.push_back({{c, a, b}, w});
    out.push_back({{c, b, a}, w});
}

} // namespace detail

/// Edge-midpoint rule, exact for quadratics.
inline const QuadratureRule& quadrature_degree2()
{
    static const QuadratureRule rule(2, {{{0.0, 0.5, 0.5}, 1.0 / 3.0},
                                         {{0.5, 0.0, 0.5}, 1.0 / 3.0},
                                         {{0.5, 0.5, 0.0}, 1.0 / 3.0}});
    return rule;
}

/// Six-point Dunavant rule, exact for degree 4.
inline const QuadratureRule& quadrature_degree4()
{
    static const QuadratureRule rule = [] {
        std::vector<QuadraturePoint> p;
        detail::push_orbit3(p, 0.44594849091596488632, 0.22338158967801146570);
        detail::push_orbit3(p, 0.091576213509770743460, 0.10995174365532186764);
        return QuadratureRule(4, std::move(p));
    }();
    return rule;
}

/// Twelve-point Dunavant rule, exact for degree 6.
inline const QuadratureRule& quadrature_degree6()
{
    static const QuadratureRule rule = [] {
        std::vector<QuadraturePoint> p;
        detail::push_orbit3(p, 0.24928674517091042129, 0.11678627572637936603);
        detail::push_orbit3(p, 0.063089014491502228340, 0.050844906370206816921);
        detail::push_orbit6(p, 0.31035245103378440542, 0.053145049844816947353,
                            0.082851075618373575194);
        return QuadratureRule(6, std::move(p));
    }();
    return rule;
}

inline const QuadratureRule& quadrature(int degree)
{
    if (degree <= 2) return quadrature_degree2();
    if (degree <= 4) return quadrature_degree4();
    if (degree <= 6) return quadrature_degree6();
    throw std::invalid_argument("quadrature: no rule available above degree 6");
}

} // namespace ppreig
