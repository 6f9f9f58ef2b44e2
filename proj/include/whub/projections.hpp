#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "whub/facial.hpp"

namespace whub {

/// Euclidean projection onto {x >= 0, <e, x> = s}. Sort-and-threshold with
/// the closed-form multiplier, so ties need no special handling.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
project_simplex(const Eigen::MatrixBase<Derived>& d, typename Derived::Scalar s) {
    using Scalar = typename Derived::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index m = d.size();
    if (m < 1) throw std::invalid_argument("project_simplex: empty input");
    if (!(s > Scalar(0))) throw std::invalid_argument("project_simplex: target sum must be positive");

    std::vector<Scalar> u(static_cast<size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) u[static_cast<size_t>(i)] = d(i);
    std::sort(u.begin(), u.end(), std::greater<Scalar>());

    Scalar tau = u[0] - s;  // rho = 1 always satisfies u_1 - (u_1 - s)/1 = s > 0
    Scalar running = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        running += u[static_cast<size_t>(i)];
        const Scalar cand = (running - s) / Scalar(i + 1);
        if (u[static_cast<size_t>(i)] - cand > Scalar(0)) tau = cand;
    }

    Vector out(m);
    for (Eigen::Index i = 0; i < m; ++i) out(i) = std::max(Scalar(0), d(i) - tau);
    return out;
}

/// Spectral factors of the projection onto {R psd, trace R = k+1}: only the
/// eigenpairs with positive projected eigenvalue. R = u * lam.asDiagonal() * u^T.
struct SpectralProjection {
    Eigen::MatrixXd u;    // m x a, a >= 1
    Eigen::VectorXd lam;  // a, positive, sums to the target trace
};

/// Throws std::runtime_error if the eigendecomposition does not converge.
template <typename Derived>
SpectralProjection project_trace_simplex_factored(const Eigen::MatrixBase<Derived>& M,
                                                  double target_trace) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.derived());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("project_R: symmetric eigendecomposition failed");
    const Eigen::VectorXd lam = project_simplex(es.eigenvalues(), target_trace);
    // Eigenvalues come back ascending, so the positive part is a suffix.
    Eigen::Index first = lam.size();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > 0.0) {
            first = i;
            break;
        }
    }
    if (first == lam.size()) first = lam.size() - 1;  // unreachable: sum k+1 > 0
    const Eigen::Index a = lam.size() - first;
    SpectralProjection out;
    out.u = es.eigenvectors().rightCols(a);
    out.lam = lam.tail(a);
    return out;
}

/// Nearest point of {R psd, trace R = k+1} in Frobenius norm.
template <typename Derived>
Eigen::MatrixXd project_R(const Eigen::MatrixBase<Derived>& M, int k) {
    const SpectralProjection p = project_trace_simplex_factored(M, double(k) + 1.0);
    return p.u * p.lam.asDiagonal() * p.u.transpose();
}

/// Projection onto Y-set: Y00 = 1, gangster entries zero, diagonal tied to
/// row/column 0, everything in [0,1]. Groups touch disjoint entries, so the
/// componentwise rule is the exact Euclidean projection. Input is
/// symmetrized first; values within 1e-14 of a bound are snapped to it.
Eigen::MatrixXd project_Y(const Eigen::MatrixXd& W, const GangsterIndex& gang);

/// Orthogonal projection onto the subspace of symmetric matrices vanishing
/// on the diagonal and on row/column 0.
template <typename Derived>
Eigen::MatrixXd project_ZA0(const Eigen::MatrixBase<Derived>& W) {
    Eigen::MatrixXd Z = W.derived();
    Z.diagonal().setZero();
    Z.row(0).setZero();
    Z.col(0).setZero();
    return Z;
}

/// Nearest point of the dual set {Z : (Z + Dhat) vanishes on the diagonal
/// and row/column 0} to the zero matrix.
Eigen::MatrixXd init_Z(const Eigen::MatrixXd& dhat);

}  // namespace whub
