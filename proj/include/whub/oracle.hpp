#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "whub/instance.hpp"

namespace whub {

/// Raised when the selection count exceeds the enumeration guard.
class GuardExceeded : public std::runtime_error {
public:
    GuardExceeded(const std::string& what, double selection_count)
        : std::runtime_error(what), count(selection_count) {}
    double count;
};

/// Number of feasible selections, prod n_j, as a double (overflow-safe
/// for guard comparisons).
double selection_count(const std::vector<int>& sizes);

struct BruteForceResult {
    double p_star = 0.0;
    std::vector<Selection> optima;  // lexicographic order
};

/// Exact minimum of x^T D x over all selections plus every selection within
/// tol_opt * (1 + |p_star|) of it. Refuses when prod n_j > guard.
BruteForceResult brute_force(const EDMData& edm, double tol_opt = 1e-9, double guard = 1e8);

struct LiftedBarycenter {
    Eigen::MatrixXd Yhat;   // (1/m) sum of (1;x_i)(1;x_i)^T
    int rank = 0;           // rank of the stacked lifted vectors
    bool sum_positive = false;  // sum_i (1;x_i) > 0 entrywise
};

LiftedBarycenter lifted_barycenter(const std::vector<Selection>& optima,
                                   const std::vector<int>& sizes);

/// Multiple-optima gap analysis: a duality gap is certified when there are
/// at least N+1-k linearly independent lifted optima, their sum is entrywise
/// positive, and a non-optimal feasible point exists.
struct GapReport {
    bool brute_available = false;  // false when the enumeration guard tripped
    double p_star = 0.0;
    std::vector<Selection> optima;
    int lifted_rank = 0;
    int threshold = 0;  // N + 1 - k
    bool sum_positive = false;
    bool rank_sufficient = false;
    bool non_optimal_exists = false;
    bool gap_certified = false;
    double empirical_gap = 0.0;  // p_star - solver_lb
    double solver_lb = 0.0;
};

GapReport gap_check(const EDMData& edm, double solver_lb, double tol_opt = 1e-9,
                    double guard = 1e8);

}  // namespace whub
