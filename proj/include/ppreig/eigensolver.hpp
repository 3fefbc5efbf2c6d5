#pragma once

// Smallest eigenpairs of the symmetric-definite pencil (A, B).

#include "sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppreig {

enum class Normalization {
    energy, ///< a(u, u) = 1
    l2,     ///< (u, u) = 1
};

struct EigenPair {
    double value = 0.0;
    Vector vector;
    Normalization normalization = Normalization::l2;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual)
    {
    }
    double residual() const { return residual_; }

private:
    double residual_;
};

struct EigsOptions {
    int max_iterations = 2000;
    /// Required ||A v - lambda B v|| / ||A v|| for every returned pair.
    double tolerance = 1e-9;
    /// Problems up to this size use the dense solver; 0 forces iteration.
    int dense_threshold = 200;
    std::uint64_t seed = 20140501;
};

namespace detail {

inline double relative_residual(const SparseMatrix& a, const SparseMatrix& b, double lambda,
                                const Vector& v)
{
    const Vector av = a * v;
    const double n = av.norm();
    return n > 0.0 ? (av - lambda * (b * v)).norm() / n : 0.0;
}

// B-orthonormal v, rescaled to the requested normalization with the
// largest-magnitude entry made positive.
inline EigenPair finish_pair(double lambda, Vector v, Normalization norm)
{
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    if (norm == Normalization::energy) v /= std::sqrt(lambda);
    return {lambda, std::move(v), norm};
}

} // namespace detail

/**
 * The k smallest eigenpairs of A v = lambda B v in ascending order.
 *
 * Small problems are solved densely. Otherwise a block of k+3 vectors is
 * driven by inverse iteration (shift zero, one LDL^T factorization of A)
 * with Rayleigh-Ritz projection at every step until every wanted Ritz pair
 * meets the residual tolerance.
 */
inline std::vector<EigenPair> eigs_smallest(const SparseMatrix& a, const SparseMatrix& b, int k,
                                            Normalization normalization = Normalization::l2,
                                            const EigsOptions& options = {})
{
    const int n = static_cast<int>(a.rows());
    if (k < 1 || k > n) throw std::invalid_argument("eigs_smallest: k must be in [1, n]");
    if (b.rows() != n || a.cols() != n || b.cols() != n)
        throw std::invalid_argument("eigs_smallest: A and B must be square and the same size");

    std::vector<EigenPair> out;
    if (n <= options.dense_threshold) {
        const Eigen::MatrixXd ad = Eigen::MatrixXd(a);
        const Eigen::MatrixXd bd = Eigen::MatrixXd(b);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ad, bd);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("eigs_smallest: dense generalized eigensolver failed", 0.0);
        for (int i = 0; i < k; ++i)
            out.push_back(detail::finish_pair(es.eigenvalues()[i], es.eigenvectors().col(i), normalization));
        return out;
    }

    const int m = std::min(n, k + 3);
    const Factorization factor(a);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd x(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = dist(rng);

    double worst = 0.0;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        Eigen::MatrixXd y(n, m);
        for (int j = 0; j < m; ++j) y.col(j) = factor.solve(b * x.col(j));
        const Eigen::MatrixXd ay = (a * y).eval();
        const Eigen::MatrixXd by = (b * y).eval();
        Eigen::MatrixXd ar = y.transpose() * ay;
        Eigen::MatrixXd br = y.transpose() * by;
        ar = 0.5 * (ar + ar.transpose()).eval();
        br = 0.5 * (br + br.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ar, br);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("eigs_smallest: Rayleigh-Ritz projection failed", worst);
        x = y * es.eigenvectors();

        worst = 0.0;
        for (int i = 0; i < k; ++i)
            worst = std::max(worst, detail::relative_residual(a, b, es.eigenvalues()[i], x.col(i)));
        if (worst <= options.tolerance) {
            for (int i = 0; i < k; ++i)
                out.push_back(detail::finish_pair(es.eigenvalues()[i], x.col(i), normalization));
            return out;
        }
    }
    throw ConvergenceError("eigs_smallest: no convergence after " + std::to_string(options.max_iterations) +
                               " iterations (residual " + std::to_string(worst) + ")",
                           worst);
}

} // namespace ppreig
