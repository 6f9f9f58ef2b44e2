#include "whub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace whub {

double selection_count(const std::vector<int>& sizes) {
    double count = 1.0;
    for (int n : sizes) count *= double(n);
    return count;
}

namespace {

// depth-first lexicographic enumeration; acc only grows (D >= 0), so
// subtrees above the cutoff can be dropped for both passes
template <typename Visit>
void enumerate(const Eigen::MatrixXd& D, const std::vector<int>& sizes,
               const std::vector<int>& offsets, const double& cutoff, Visit&& visit) {
    const int k = static_cast<int>(sizes.size());
    std::vector<int> picks(static_cast<size_t>(k), 0);
    std::vector<int> chosen(static_cast<size_t>(k), 0);
    std::vector<double> acc(static_cast<size_t>(k) + 1, 0.0);

    int depth = 0;
    picks[0] = -1;
    while (depth >= 0) {
        if (++picks[static_cast<size_t>(depth)] >= sizes[static_cast<size_t>(depth)]) {
            --depth;
            continue;
        }
        const int g = offsets[static_cast<size_t>(depth)] + picks[static_cast<size_t>(depth)];
        double add = 0.0;
        for (int t = 0; t < depth; ++t) add += D(chosen[static_cast<size_t>(t)], g);
        const double val = acc[static_cast<size_t>(depth)] + 2.0 * add;
        if (val > cutoff) continue;
        if (depth == k - 1) {
            visit(picks, val);
            continue;
        }
        chosen[static_cast<size_t>(depth)] = g;
        acc[static_cast<size_t>(depth) + 1] = val;
        ++depth;
        picks[static_cast<size_t>(depth)] = -1;
    }
}

}  // namespace

BruteForceResult brute_force(const EDMData& edm, double tol_opt, double guard) {
    if (tol_opt < 0.0) throw std::invalid_argument("brute_force: tol_opt must be >= 0");
    const double count = selection_count(edm.sizes);
    if (count > guard)
        throw GuardExceeded("brute_force: " + std::to_string(count) +
                                " selections exceed the enumeration guard of " + std::to_string(guard),
                            count);

    std::vector<int> offsets;
    offsets.reserve(edm.sizes.size());
    int off = 0;
    for (int n : edm.sizes) {
        offsets.push_back(off);
        off += n;
    }

    BruteForceResult out;
    out.p_star = std::numeric_limits<double>::infinity();
    // the shrinking incumbent doubles as the pruning cutoff
    enumerate(edm.D, edm.sizes, offsets, out.p_star,
              [&](const std::vector<int>&, double val) { out.p_star = std::min(out.p_star, val); });

    const double cutoff = out.p_star + tol_opt * (1.0 + std::abs(out.p_star));
    enumerate(edm.D, edm.sizes, offsets, cutoff,
              [&](const std::vector<int>& picks, double) { out.optima.push_back({picks}); });
    return out;
}

LiftedBarycenter lifted_barycenter(const std::vector<Selection>& optima,
                                   const std::vector<int>& sizes) {
    if (optima.empty()) throw std::invalid_argument("lifted_barycenter: needs at least one optimum");
    int N = 0;
    for (int n : sizes) N += n;
    const Eigen::Index np1 = N + 1;
    const Eigen::Index m = static_cast<Eigen::Index>(optima.size());

    Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(np1, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        stacked(0, c) = 1.0;
        for (int g : selection_to_global(optima[static_cast<size_t>(c)], sizes)) stacked(g + 1, c) = 1.0;
    }

    LiftedBarycenter out;
    out.Yhat = (stacked * stacked.transpose()) / double(m);
    out.sum_positive = (stacked.rowwise().sum().minCoeff() > 0.0);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    out.rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * smax) ++out.rank;
    return out;
}

GapReport gap_check(const EDMData& edm, double solver_lb, double tol_opt, double guard) {
    GapReport rep;
    rep.solver_lb = solver_lb;
    int N = 0;
    for (int n : edm.sizes) N += n;
    rep.threshold = N + 1 - edm.num_sets();

    const double count = selection_count(edm.sizes);
    if (count > guard) {
        rep.brute_available = false;
        rep.empirical_gap = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    rep.brute_available = true;

    BruteForceResult bf = brute_force(edm, tol_opt, guard);
    rep.p_star = bf.p_star;
    rep.empirical_gap = bf.p_star - solver_lb;
    rep.non_optimal_exists = double(bf.optima.size()) < count;

    const LiftedBarycenter lift = lifted_barycenter(bf.optima, edm.sizes);
    rep.lifted_rank = lift.rank;
    rep.sum_positive = lift.sum_positive;
    rep.rank_sufficient = (lift.rank >= rep.threshold);
    rep.gap_certified = rep.rank_sufficient && rep.sum_positive && rep.non_optimal_exists;
    rep.optima = std::move(bf.optima);
    return rep;
}

}  // namespace whub
