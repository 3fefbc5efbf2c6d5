#pragma once

// Sparse symmetric matrices and a reusable LDL^T factorization.

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppreig {

/// Compressed row storage; rows sorted, explicit zeros pruned on finalization.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double pivot_ratio)
        : std::runtime_error(what), pivot_ratio_(pivot_ratio)
    {
    }
    double pivot_ratio() const { return pivot_ratio_; }

private:
    double pivot_ratio_;
};

inline SparseMatrix from_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets)
{
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

/// max |M - M^T|.
inline double asymmetry(const SparseMatrix& m)
{
    const SparseMatrix t = m.transpose();
    const SparseMatrix d = m - t;
    double r = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

/**
 * Symmetric LDL^T factorization (fill-reducing AMD ordering, diagonal D).
 *
 * Handles symmetric indefinite matrices whose pivots stay away from zero,
 * which covers the shifted operators A - sigma B met by the two-grid and
 * adaptive schemes. A pivot below `singular_tolerance` relative to the
 * largest pivot is reported as singularity; a ratio below
 * `ill_conditioned_tolerance` only sets the ill-conditioning flag.
 */
class Factorization {
public:
    static constexpr double singular_tolerance = 1e-14;
    static constexpr double ill_conditioned_tolerance = 1e-10;

    explicit Factorization(const SparseMatrix& m) : matrix_(m)
    {
        if (m.rows() != m.cols()) throw std::invalid_argument("Factorization: matrix is not square");
        const Eigen::SparseMatrix<double> col = m;
        ldlt_.compute(col);
        if (ldlt_.info() != Eigen::Success)
            throw SingularMatrixError("Factorization: zero pivot encountered", 0.0);
        const Vector d = ldlt_.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        const double dmin = d.cwiseAbs().minCoeff();
        pivot_ratio_ = dmax > 0.0 ? dmin / dmax : 0.0;
        if (!(pivot_ratio_ > singular_tolerance))
            throw SingularMatrixError("Factorization: matrix is singular to tolerance (pivot ratio " +
                                          std::to_string(pivot_ratio_) + ")",
                                      pivot_ratio_);
        negative_pivots_ = static_cast<int>((d.array() < 0.0).count());
    }

    int size() const { return static_cast<int>(matrix_.rows()); }
    double pivot_ratio() const { return pivot_ratio_; }
    bool ill_conditioned() const { return pivot_ratio_ < ill_conditioned_tolerance; }
    /// Inertia: number of negative eigenvalues of the factored matrix.
    int negative_pivots() const { return negative_pivots_; }

    /// Direct solve followed by one step of iterative refinement.
    Vector solve(const Vector& rhs) const
    {
        if (rhs.size() != size()) throw std::invalid_argument("Factorization: rhs has wrong length");
        Vector x = ldlt_.solve(rhs);
        const Vector r = rhs - matrix_ * x;
        x += ldlt_.solve(r);
        return x;
    }

private:
    SparseMatrix matrix_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    double pivot_ratio_ = 0.0;
    int negative_pivots_ = 0;
};

inline Vector factor_solve(const SparseMatrix& m, const Vector& rhs)
{
    return Factorization(m).solve(rhs);
}

} // namespace ppreig
