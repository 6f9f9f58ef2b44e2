#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace whub {

/// Problem data: k point sets in R^d. Set j is an n_j x d matrix whose rows
/// are points. The global point ordering concatenates the sets in order.
struct Instance {
    int d = 0;
    std::vector<Eigen::MatrixXd> sets;
    std::string label;

    int num_sets() const { return static_cast<int>(sets.size()); }
    Eigen::Index total_points() const;
    std::vector<int> sizes() const;

    /// Throws std::invalid_argument on any structural violation
    /// (no sets, empty set, wrong coordinate count).
    void validate() const;
};

struct PointRef {
    int set = 0;    // 0-based set index
    int local = 0;  // 0-based index within the set
};

/// Squared-distance matrix D of all N points plus its bordered version
/// Dhat, which is D with a zero row/column prepended (index 0).
struct EDMData {
    Eigen::MatrixXd D;
    Eigen::MatrixXd Dhat;
    std::vector<PointRef> point_index;  // global (0-based) -> (set, local)
    std::vector<int> sizes;

    Eigen::Index n() const { return D.rows(); }
    int num_sets() const { return static_cast<int>(sizes.size()); }
};

/// One pick per set, 0-based local indices. The CLI and file formats report
/// picks 1-based.
struct Selection {
    std::vector<int> picks;

    bool operator==(const Selection& o) const { return picks == o.picks; }
};

/// Global 0-based row indices of the chosen points.
std::vector<int> selection_to_global(const Selection& sel, const std::vector<int>& sizes);

EDMData build_edm(const Instance& inst);

/// x^T D x for the binary indicator of sel: twice the sum of squared
/// distances over chosen pairs.
double objective_value(const EDMData& edm, const Selection& sel);

/// Sum of squared distances to the barycenter: p_star / (2k).
double wasserstein_value(double p_star, int k);

/// k sets of n points each (n_j uniform in [n-2, n+2] when vary_sizes),
/// coordinates i.i.d. uniform in [0,1]^d. Deterministic in the seed.
Instance gen_random(int k, int n, int d, bool vary_sizes, std::uint64_t seed);

/// Wheel of wheels: k sets of k points in the plane. Set j is the full ring
/// of unit-circle centroids, shrunk by a quarter of the adjacent-centroid
/// chord and re-centered at centroid j. Requires k >= 3.
Instance gen_wheel(int k);

/// Raised on malformed or inconsistent instance files; the message carries
/// the origin (path) and location of the offending element.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

Instance parse_instance_json(const std::string& text, const std::string& origin);
std::string instance_to_json(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace whub
