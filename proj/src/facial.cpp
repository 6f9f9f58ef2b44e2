#include "whub/facial.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace whub {

namespace {

void check_sizes(const std::vector<int>& sizes) {
    if (sizes.empty()) throw std::invalid_argument("facial basis: needs at least one set");
    for (int n : sizes)
        if (n < 1) throw std::invalid_argument("facial basis: set sizes must be positive");
}

Eigen::SparseMatrix<double> structured_V(const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    const int N = std::accumulate(sizes.begin(), sizes.end(), 0);
    const int m = N + 1 - k;

    std::vector<Eigen::Triplet<double>> trips;
    size_t nnz = 1;
    for (int n : sizes) nnz += static_cast<size_t>(n) * (n + 1) / 2 + static_cast<size_t>(n);
    trips.reserve(nnz);

    // per-block columns: column t carries t copies of -v_t above one vbar_t
    int col = 0;
    int row0 = 1;
    for (int n : sizes) {
        for (int t = 1; t < n; ++t) {
            const double v = 1.0 / std::sqrt(double(t) + double(t) * t);
            for (int r = 0; r < t; ++r) trips.emplace_back(row0 + r, col, -v);
            trips.emplace_back(row0 + t, col, double(t) * v);
            ++col;
        }
        row0 += n;
    }

    // dense last column: alpha on the border row, alpha/n_j inside block j
    double inv_sum = 0.0;
    for (int n : sizes) inv_sum += 1.0 / n;
    const double alpha = -1.0 / std::sqrt(1.0 + inv_sum);
    trips.emplace_back(0, m - 1, alpha);
    row0 = 1;
    for (int n : sizes) {
        for (int r = 0; r < n; ++r) trips.emplace_back(row0 + r, m - 1, alpha / n);
        row0 += n;
    }

    Eigen::SparseMatrix<double> V(N + 1, m);
    V.setFromTriplets(trips.begin(), trips.end());
    V.makeCompressed();
    return V;
}

Eigen::SparseMatrix<double> qr_nullspace_V(const std::vector<int>& sizes) {
    const Eigen::MatrixXd B = constraint_matrix(sizes);
    const Eigen::Index np1 = B.cols();
    const Eigen::Index k = B.rows();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B.transpose());
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd Vd = Q.rightCols(np1 - k);
    return Vd.sparseView(1.0, 1e-300);
}

}  // namespace

Eigen::MatrixXd constraint_matrix(const std::vector<int>& sizes) {
    check_sizes(sizes);
    const int k = static_cast<int>(sizes.size());
    const int N = std::accumulate(sizes.begin(), sizes.end(), 0);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(k, N + 1);
    B.col(0).setConstant(-1.0);
    int col = 1;
    for (int j = 0; j < k; ++j) {
        B.row(j).segment(col, sizes[static_cast<size_t>(j)]).setOnes();
        col += sizes[static_cast<size_t>(j)];
    }
    return B;
}

FacialBasis build_facial_basis(const std::vector<int>& sizes, FacialBasis::Mode mode) {
    check_sizes(sizes);
    FacialBasis basis;
    basis.mode = mode;
    basis.sizes = sizes;
    basis.V = (mode == FacialBasis::Mode::structured) ? structured_V(sizes) : qr_nullspace_V(sizes);
    return basis;
}

GangsterIndex build_gangster(const std::vector<int>& sizes) {
    check_sizes(sizes);
    GangsterIndex g;
    size_t count = 0;
    for (int n : sizes) count += static_cast<size_t>(n) * (n - 1) / 2;
    g.pairs.reserve(count);
    int offset = 1;
    for (int n : sizes) {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) g.pairs.emplace_back(offset + a, offset + b);
        offset += n;
    }
    return g;
}

ScaledObjective scale_objective(const Eigen::MatrixXd& dhat, const FacialBasis& basis,
                                double alpha, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("scale_objective: delta must be positive");
    const int k = basis.num_sets();
    const Eigen::Index np1 = dhat.rows();
    if (basis.V.rows() != np1)
        throw std::invalid_argument("scale_objective: basis/objective dimension mismatch");

    ScaledObjective out;
    out.alpha = alpha;
    out.delta = delta;
    out.offset = delta * alpha * double(k + 1);

    const Eigen::MatrixXd inner = basis.V.transpose() * dhat * basis.V;
    Eigen::MatrixXd proj = basis.V * inner * basis.V.transpose();
    proj = 0.5 * (proj + proj.transpose());
    out.dhat_eff = delta * (proj + alpha * Eigen::MatrixXd::Identity(np1, np1));
    return out;
}

}  // namespace whub
