#include "whub/solver.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "whub/bounds.hpp"
#include "whub/projections.hpp"

namespace whub {

double relative_gap(double lb, double ub) {
    return (ub - lb) / (std::abs(ub) + std::abs(lb) + 1.0);
}

double adapt_beta(double beta, double r, double s, double mu, double tau_inc, double tau_dec) {
    if (r > mu * s) return beta * tau_inc;
    if (s > mu * r) return beta / tau_dec;
    return beta;
}

Residuals kkt_residuals(const SolverState& state, const Eigen::MatrixXd& objective,
                        const FacialBasis& basis, const GangsterIndex& gang) {
    const int k = basis.num_sets();
    Residuals res;
    res.r = (state.Y - state.Ylift).norm();
    const Eigen::MatrixXd VtZV = basis.V.transpose() * state.Z * basis.V;
    res.sR = (state.R - project_R(state.R + VtZV, k)).norm();
    res.sY = (state.Y - project_Y(state.Y - objective - state.Zhalf, gang)).norm();
    return res;
}

namespace {

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.eps > 0.0) || !(cfg.eta > 0.0))
        throw std::invalid_argument("solver config: tolerances must be positive");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("solver config: gamma must lie in (0,1)");
    if (!(cfg.mu > 1.0 && cfg.tau_inc > 1.0 && cfg.tau_dec > 1.0))
        throw std::invalid_argument("solver config: mu, tau_inc, tau_dec must exceed 1");
    if (cfg.stall_max < 1 || cfg.bound_every < 1)
        throw std::invalid_argument("solver config: stall_max and bound_every must be >= 1");
    if (cfg.scaled && !(cfg.delta > 0.0))
        throw std::invalid_argument("solver config: delta must be positive");
}

// increment the unconstrained entries of Z by c * (A - B); constrained
// entries (diagonal, row/column 0) stay untouched
void add_scaled_za0_diff(Eigen::MatrixXd& Z, double c, const Eigen::MatrixXd& A,
                         const Eigen::MatrixXd& B) {
    const Eigen::Index n = Z.rows() - 1;
    for (Eigen::Index j = 1; j <= n; ++j)
        for (Eigen::Index i = 1; i <= n; ++i)
            if (i != j) Z(i, j) += c * (A(i, j) - B(i, j));
}

int rank_estimate(const Eigen::MatrixXd& Y) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return -1;
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmax > 0.0)) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-6 * lmax) ++rank;
    return rank;
}

#ifndef NDEBUG
void debug_check_iterates(const SolverState& s, const Eigen::MatrixXd& objective, int k) {
    const Eigen::Index n = s.Y.rows() - 1;
    assert(std::abs(s.R.trace() - double(k + 1)) <= 1e-6 * (1.0 + double(k)));
    assert(std::abs(s.Y(0, 0) - 1.0) == 0.0);
    for (Eigen::Index i = 0; i <= n; ++i) {
        assert(std::abs(s.Z(i, i) + objective(i, i)) <= 1e-9 * (1.0 + std::abs(objective(i, i))));
        assert(std::abs(s.Z(0, i) + objective(0, i)) <= 1e-9 * (1.0 + std::abs(objective(0, i))));
    }
}
#endif

}  // namespace

SolveReport solve(const EDMData& edm, const FacialBasis& basis, const GangsterIndex& gang,
                  const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_config(cfg);

    const int k = edm.num_sets();
    const Eigen::Index np1 = edm.Dhat.rows();
    if (basis.V.rows() != np1 || basis.num_sets() != k)
        throw std::invalid_argument("solve: basis does not match instance");

    ResolvedConfig rc{cfg.eps,
                      cfg.eta,
                      cfg.maxiter > 0 ? cfg.maxiter : 10000 + long(k) * long(np1),
                      cfg.gamma,
                      cfg.beta0 > 0.0 ? cfg.beta0 : double(std::max<long>(long(np1) / k, 1)),
                      cfg.freeze_beta,
                      cfg.mu,
                      cfg.tau_inc,
                      cfg.tau_dec,
                      cfg.stall_max,
                      cfg.bound_every,
                      cfg.scaled,
                      cfg.scaled ? cfg.alpha : 0.0,
                      cfg.scaled ? cfg.delta : 1.0};

    ScaledObjective sc;
    if (cfg.scaled) sc = scale_objective(edm.Dhat, basis, cfg.alpha, cfg.delta);
    const Eigen::MatrixXd& objective = cfg.scaled ? sc.dhat_eff : edm.Dhat;

    SolverState st;
    st.Y = Eigen::MatrixXd::Zero(np1, np1);
    st.Z = init_Z(objective);
    st.Zhalf = st.Z;
    st.Ylift = Eigen::MatrixXd::Zero(np1, np1);
    st.beta = rc.beta0;
    st.best_lb = -std::numeric_limits<double>::infinity();
    st.best_ub = std::numeric_limits<double>::infinity();
    st.best_lb_in = -std::numeric_limits<double>::infinity();
    st.best_ub_in = std::numeric_limits<double>::infinity();
    st.stop_reason = "maxiter";

    const Eigen::SparseMatrix<double> Vt = basis.V.transpose();
    Eigen::MatrixXd S(np1, np1), tmp(np1 - k, np1), M(np1 - k, np1 - k), T, W(np1, np1);

    if (cfg.log)
        (*cfg.log) << "iter beta r sR sY lb ub relgap\n";

    while (st.j < rc.maxiter) {
        // R-update via the spectral simplex projection of V^T (Y + Z/beta) V
        S = st.Y + st.Z / st.beta;
        tmp.noalias() = Vt * S;
        M.noalias() = tmp * basis.V;
        SpectralProjection sp;
        try {
            sp = project_trace_simplex_factored(M, double(k + 1));
        } catch (const std::runtime_error& e) {
            throw SolverNumericalError(e.what(), st.j,
                                       std::make_shared<const SolverState>(st));
        }
        T.noalias() = basis.V * sp.u;
        st.Ylift.noalias() = (T * sp.lam.asDiagonal()) * T.transpose();

        // first dual step
        st.Zhalf = st.Z;
        add_scaled_za0_diff(st.Zhalf, rc.gamma * st.beta, st.Y, st.Ylift);

        // Y-update
        W = st.Ylift - (objective + st.Zhalf) / st.beta;
        st.Y = project_Y(W, gang);

        // second dual step
        st.Z = st.Zhalf;
        add_scaled_za0_diff(st.Z, rc.gamma * st.beta, st.Y, st.Ylift);

        ++st.j;
        if (!st.Y.allFinite() || !st.Z.allFinite())
            throw SolverNumericalError("solve: non-finite iterate", st.j,
                                       std::make_shared<const SolverState>(st));

        const bool evaluate = (st.j % rc.bound_every == 0) || (st.j == rc.maxiter);
        if (evaluate || cfg.observer) {
            st.R.noalias() = (sp.u * sp.lam.asDiagonal()) * sp.u.transpose();
        }
        if (cfg.observer) cfg.observer(st);
#ifndef NDEBUG
        if (cfg.observer) debug_check_iterates(st, objective, k);
#endif
        if (!evaluate) continue;

        const Residuals res = kkt_residuals(st, objective, basis, gang);
        st.r = res.r;
        st.sR = res.sR;
        st.sY = res.sY;

        const double lb_in = lower_bound(st.Z, objective, basis, gang, k);
        const Selection s_col = round_column0(st.Y, edm.sizes);
        const Selection s_pf = round_perron(st.Y, edm.sizes);
        const double u_col = objective_value(edm, s_col);
        const double u_pf = objective_value(edm, s_pf);
        const double ub_raw = std::min(u_col, u_pf);
        const Selection& sel = (u_col <= u_pf) ? s_col : s_pf;
        const double ub_in = cfg.scaled ? sc.scale(ub_raw) : ub_raw;
        const double lb_raw = cfg.scaled ? sc.unscale(lb_in) : lb_in;

        bool improved = false;
        if (lb_raw > st.best_lb + 1e-12) improved = true;
        if (ub_raw < st.best_ub - 1e-12) improved = true;
        if (lb_raw > st.best_lb) {
            st.best_lb = lb_raw;
            st.best_lb_in = lb_in;
        }
        if (ub_raw < st.best_ub) {
            st.best_ub = ub_raw;
            st.best_ub_in = ub_in;
            st.best_sel = sel;
            st.have_sel = true;
        }
        if (!st.have_sel) {
            st.best_sel = sel;
            st.have_sel = true;
        }
        st.stall = improved ? 0 : st.stall + 1;

        const double gap = relative_gap(st.best_lb, st.best_ub);
        st.history.push_back({st.j, st.beta, res.r, res.sR, res.sY, st.best_lb, st.best_ub, gap});
        if (cfg.log)
            (*cfg.log) << st.j << ' ' << st.beta << ' ' << res.r << ' ' << res.sR << ' ' << res.sY
                       << ' ' << st.best_lb << ' ' << st.best_ub << ' ' << gap << '\n';

        if (gap <= rc.eps) {
            st.stop_reason = "gap";
            break;
        }
        if (std::max({res.r, res.sR, res.sY}) <= rc.eta) {
            st.stop_reason = "kkt";
            break;
        }
        if (st.stall >= rc.stall_max) {
            st.stop_reason = "stall";
            break;
        }
        if (!rc.freeze_beta)
            st.beta = adapt_beta(st.beta, res.r, std::max(res.sR, res.sY), rc.mu, rc.tau_inc, rc.tau_dec);
    }

    SolveReport rep;
    rep.lb = st.best_lb;
    rep.ub = st.best_ub;
    rep.rel_gap = relative_gap(st.best_lb, st.best_ub);
    rep.selection = st.best_sel;
    rep.iterations = st.j;
    rep.stop_reason = st.stop_reason;
    rep.rank_y = rank_estimate(st.Y);
    rep.config = rc;
    rep.lb_internal = st.best_lb_in;
    rep.ub_internal = st.best_ub_in;
    rep.history = std::move(st.history);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace whub
