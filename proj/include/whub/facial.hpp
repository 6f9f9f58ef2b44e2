#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <utility>
#include <vector>

namespace whub {

/// Orthonormal basis V of the nullspace of B = [-e | A], where A is the
/// block row-sum matrix of the set sizes. Stored sparse; the structured mode
/// uses the explicit per-block construction, the fallback orthonormalizes
/// null(B) with a dense QR.
struct FacialBasis {
    enum class Mode { structured, orthonormalized_nullspace };

    Eigen::SparseMatrix<double> V;  // (N+1) x (N+1-k)
    Mode mode = Mode::structured;
    std::vector<int> sizes;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(V); }
    int num_sets() const { return static_cast<int>(sizes.size()); }
};

FacialBasis build_facial_basis(const std::vector<int>& sizes,
                               FacialBasis::Mode mode = FacialBasis::Mode::structured);

/// The constraint matrix B = [-e | A], k x (N+1). Dense; test/debug use.
Eigen::MatrixXd constraint_matrix(const std::vector<int>& sizes);

/// Entries of the bordered matrix forced to zero: the off-diagonal positions
/// of the same-set diagonal blocks, as (i, j) with 1 <= i < j <= N.
struct GangsterIndex {
    std::vector<std::pair<int, int>> pairs;
};

GangsterIndex build_gangster(const std::vector<int>& sizes);

/// arrow(Y) = (Y00; diag(Ybar) - y) for Y = [Y00 y^T; y Ybar].
template <typename Derived>
Eigen::VectorXd arrow(const Eigen::MatrixBase<Derived>& Y) {
    const Eigen::Index n = Y.rows() - 1;
    Eigen::VectorXd out(n + 1);
    out(0) = Y(0, 0);
    out.tail(n) = Y.derived().diagonal().tail(n) - Y.derived().col(0).tail(n);
    return out;
}

/// arrow with the first component zeroed.
template <typename Derived>
Eigen::VectorXd arrow0(const Eigen::MatrixBase<Derived>& Y) {
    Eigen::VectorXd out = arrow(Y);
    out(0) = 0.0;
    return out;
}

/// Objective actually handed to the solver: delta * (P_V Dhat P_V + alpha I)
/// with P_V = V V^T. On the feasible set (trace Y = k+1, Y = P_V Y P_V) the
/// original objective is (<dhat_eff, Y> - offset) / delta.
struct ScaledObjective {
    Eigen::MatrixXd dhat_eff;
    double alpha = 0.0;
    double delta = 1.0;
    double offset = 0.0;  // delta * alpha * (k+1)

    double unscale(double v) const { return (v - offset) / delta; }
    double scale(double v) const { return v * delta + offset; }
};

/// Requires delta > 0 (a negative scale would flip the optimization sense).
ScaledObjective scale_objective(const Eigen::MatrixXd& dhat, const FacialBasis& basis,
                                double alpha, double delta);

}  // namespace whub
