#pragma once

#include <Eigen/Dense>

#include "whub/facial.hpp"
#include "whub/instance.hpp"

namespace whub {

/// Closed-form min_{Y in Y-set} <C, Y>: the constraint groups of the Y-set
/// touch disjoint entries, so the LP separates into the fixed corner, one
/// clamped variable per arrow-tied group, and one per free off-diagonal pair.
double inner_lp_min(const Eigen::MatrixXd& C, const GangsterIndex& gang);

/// Dual-function value g(Z) = min_{Y in Y-set} <dhat + Z, Y>
///                            - (k+1) lambda_max(V^T Z V):
/// a valid lower bound on the relaxation optimum, hence on the hard optimum.
/// lambda_max is padded by a backward-stability margin so the bound stays on
/// the safe side of floating-point eigenvalue error.
double lower_bound(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& dhat,
                   const FacialBasis& basis, const GangsterIndex& gang, int k);

/// Greedy per-block argmax of column 0 of Y (entries 1..N). Ties go to the
/// lowest local index.
Selection round_column0(const Eigen::MatrixXd& Y, const std::vector<int>& sizes);

/// Per-block argmax of the leading eigenvector of Y, sign-normalized to the
/// nonnegative orthant; entry 0 is dropped. If the normalized vector still
/// has entries below -1e-10 the rounding falls back to absolute values and
/// sets *mixed_sign.
Selection round_perron(const Eigen::MatrixXd& Y, const std::vector<int>& sizes,
                       bool* mixed_sign = nullptr);

struct BoundsCertificate {
    enum class Source { column0, perron };
    double lb = 0.0;
    double ub = 0.0;
    Selection selection;
    Source source = Source::column0;
    double gap = 0.0;
    double rel_gap = 0.0;
};

/// Lower bound from Z plus the better of the two roundings of Y.
BoundsCertificate certify(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z,
                          const EDMData& edm, const FacialBasis& basis,
                          const GangsterIndex& gang);

}  // namespace whub
