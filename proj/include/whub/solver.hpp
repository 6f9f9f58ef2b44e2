#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "whub/facial.hpp"
#include "whub/instance.hpp"

namespace whub {

/// Knobs of the splitting solver. maxiter and beta0 resolve to the size
/// dependent defaults 1e4 + k(N+1) and max(floor((N+1)/k), 1) when <= 0.
struct SolverConfig {
    double eps = 1e-12;   // relative-gap stop
    double eta = 1e-10;   // KKT-residual stop
    long maxiter = 0;     // <= 0: 1e4 + k(N+1)
    double gamma = 0.9;   // dual step fraction, in (0,1)
    double beta0 = 0.0;   // <= 0: max(floor((N+1)/k), 1)
    bool freeze_beta = false;
    double mu = 2.0;
    double tau_inc = 2.0;
    double tau_dec = 2.0;
    int stall_max = 200;
    int bound_every = 100;
    bool scaled = false;  // apply delta * (P_V Dhat P_V + alpha I)
    double alpha = 0.0;
    double delta = 1.0;

    std::ostream* log = nullptr;  // one line per bound evaluation
    std::function<void(const struct SolverState&)> observer;  // after each iteration
};

/// Plain-value echo of the configuration a solve actually ran with.
struct ResolvedConfig {
    double eps, eta;
    long maxiter;
    double gamma, beta0;
    bool freeze_beta;
    double mu, tau_inc, tau_dec;
    int stall_max, bound_every;
    bool scaled;
    double alpha, delta;
};

struct BoundRecord {
    long iter;
    double beta, r, sR, sY;
    double lb, ub, rel_gap;  // running best, report frame
};

struct SolverState {
    long j = 0;
    Eigen::MatrixXd Y, R, Z, Zhalf, Ylift;
    double beta = 0.0;
    double r = -1.0, sR = -1.0, sY = -1.0;  // last evaluated; -1 before first
    double best_lb, best_ub;         // report frame
    double best_lb_in, best_ub_in;   // solver (possibly scaled) frame
    Selection best_sel;
    bool have_sel = false;
    int stall = 0;
    std::string stop_reason;
    std::vector<BoundRecord> history;
};

struct Residuals {
    double r, sR, sY;
};

/// KKT residuals at the state's iterates: primal ||Y - VRV^T||, dual-R
/// ||R - P_R(R + V^T Z V)||, dual-Y ||Y - P_Y(Y - objective - Zhalf)||,
/// all Frobenius.
Residuals kkt_residuals(const SolverState& state, const Eigen::MatrixXd& objective,
                        const FacialBasis& basis, const GangsterIndex& gang);

/// Residual-balancing penalty rule: grow when the primal residual r
/// overshoots the dual residual s by more than mu, shrink in the mirrored
/// case, otherwise keep.
double adapt_beta(double beta, double r, double s, double mu = 2.0, double tau_inc = 2.0,
                  double tau_dec = 2.0);

struct SolveReport {
    double lb = 0.0, ub = 0.0, rel_gap = 0.0;
    Selection selection;
    long iterations = 0;
    std::string stop_reason;
    double wall_seconds = 0.0;
    int rank_y = 0;
    ResolvedConfig config{};
    // solver-frame bests; equal to lb/ub when no scaling is active
    double lb_internal = 0.0, ub_internal = 0.0;
    std::vector<BoundRecord> history;
};

/// Raised when an iterate goes non-finite or an eigendecomposition fails;
/// carries the iteration index and a snapshot of the state at failure.
class SolverNumericalError : public std::runtime_error {
public:
    SolverNumericalError(const std::string& what, long iter,
                         std::shared_ptr<const SolverState> snapshot = nullptr)
        : std::runtime_error(what + " (iteration " + std::to_string(iter) + ")"),
          iteration(iter),
          state(std::move(snapshot)) {}
    long iteration;
    std::shared_ptr<const SolverState> state;
};

SolveReport solve(const EDMData& edm, const FacialBasis& basis, const GangsterIndex& gang,
                  const SolverConfig& cfg = {});

/// (ub - lb) / (|ub| + |lb| + 1)
double relative_gap(double lb, double ub);

}  // namespace whub
