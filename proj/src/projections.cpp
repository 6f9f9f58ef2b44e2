#include "whub/projections.hpp"

#include <cmath>

namespace whub {

namespace {

inline double snap01(double v) {
    double t = std::min(1.0, std::max(0.0, v));
    if (std::abs(t) <= 1e-14) return 0.0;
    if (std::abs(1.0 - t) <= 1e-14) return 1.0;
    return t;
}

}  // namespace

Eigen::MatrixXd project_Y(const Eigen::MatrixXd& W, const GangsterIndex& gang) {
    const Eigen::Index n = W.rows() - 1;
    Eigen::MatrixXd S = 0.5 * (W + W.transpose());
    Eigen::MatrixXd Y(n + 1, n + 1);

    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = i + 1; j <= n; ++j) {
            const double v = snap01(S(i, j));
            Y(i, j) = v;
            Y(j, i) = v;
        }
    }
    // arrow ties: diagonal entry equals the matching row-0/column-0 entries
    for (Eigen::Index i = 1; i <= n; ++i) {
        const double t = snap01((S(i, i) + 2.0 * S(0, i)) / 3.0);
        Y(i, i) = t;
        Y(0, i) = t;
        Y(i, 0) = t;
    }
    for (const auto& [i, j] : gang.pairs) {
        Y(i, j) = 0.0;
        Y(j, i) = 0.0;
    }
    Y(0, 0) = 1.0;
    return Y;
}

Eigen::MatrixXd init_Z(const Eigen::MatrixXd& dhat) {
    const Eigen::Index np1 = dhat.rows();
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(np1, np1);
    Z.diagonal() = -dhat.diagonal();
    Z.row(0) = -dhat.row(0);
    Z.col(0) = -dhat.col(0);
    return Z;
}

}  // namespace whub
