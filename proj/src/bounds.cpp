#include "whub/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "whub/projections.hpp"
#include "whub/solver.hpp"

namespace whub {

double inner_lp_min(const Eigen::MatrixXd& C, const GangsterIndex& gang) {
    const Eigen::Index N = C.rows() - 1;
    double val = C(0, 0);
    for (Eigen::Index i = 1; i <= N; ++i) val += std::min(0.0, C(i, i) + 2.0 * C(0, i));
    double pair_sum = 0.0;
    for (Eigen::Index i = 1; i <= N; ++i)
        for (Eigen::Index j = i + 1; j <= N; ++j) pair_sum += std::min(0.0, C(i, j));
    for (const auto& [i, j] : gang.pairs) pair_sum -= std::min(0.0, C(i, j));
    return val + 2.0 * pair_sum;
}

double lower_bound(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& dhat,
                   const FacialBasis& basis, const GangsterIndex& gang, int k) {
    if (dhat.rows() != Z.rows())
        throw std::invalid_argument("lower_bound: objective/dual dimension mismatch");

    const double val = inner_lp_min(dhat + Z, gang);

    const Eigen::MatrixXd M = basis.V.transpose() * Z * basis.V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("lower_bound: eigendecomposition failed");
    // pad lambda_max by a backward-stability margin so the bound stays valid
    // under floating-point eigenvalue error
    double lam = es.eigenvalues()(M.rows() - 1);
    lam += double(M.rows()) * std::numeric_limits<double>::epsilon() * (1.0 + M.norm());
    return val - double(k + 1) * lam;
}


namespace {

Selection blockwise_argmax(const Eigen::VectorXd& w, const std::vector<int>& sizes) {
    Selection sel;
    sel.picks.reserve(sizes.size());
    int offset = 0;
    for (int n : sizes) {
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (w(offset + i) > w(offset + best)) best = i;
        sel.picks.push_back(best);
        offset += n;
    }
    return sel;
}

}  // namespace

Selection round_column0(const Eigen::MatrixXd& Y, const std::vector<int>& sizes) {
    const Eigen::Index N = Y.rows() - 1;
    return blockwise_argmax(Y.col(0).tail(N), sizes);
}

Selection round_perron(const Eigen::MatrixXd& Y, const std::vector<int>& sizes, bool* mixed_sign) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("round_perron: eigendecomposition failed");
    Eigen::VectorXd v = es.eigenvectors().col(Y.rows() - 1);
    if (v.sum() < 0.0) v = -v;
    if (mixed_sign) *mixed_sign = false;
    if (v.minCoeff() < -1e-10) {
        v = v.cwiseAbs();
        if (mixed_sign) *mixed_sign = true;
    }
    return blockwise_argmax(v.tail(Y.rows() - 1), sizes);
}

BoundsCertificate certify(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z,
                          const EDMData& edm, const FacialBasis& basis,
                          const GangsterIndex& gang) {
    const int k = edm.num_sets();
    BoundsCertificate cert;
    cert.lb = lower_bound(Z, edm.Dhat, basis, gang, k);

    const Selection s_col = round_column0(Y, edm.sizes);
    const Selection s_pf = round_perron(Y, edm.sizes);
    const double u_col = objective_value(edm, s_col);
    const double u_pf = objective_value(edm, s_pf);
    if (u_col <= u_pf) {
        cert.ub = u_col;
        cert.selection = s_col;
        cert.source = BoundsCertificate::Source::column0;
    } else {
        cert.ub = u_pf;
        cert.selection = s_pf;
        cert.source = BoundsCertificate::Source::perron;
    }
    cert.gap = cert.ub - cert.lb;
    cert.rel_gap = relative_gap(cert.lb, cert.ub);
    return cert;
}

}  // namespace whub
