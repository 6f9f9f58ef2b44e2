#include "whub/instance.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace whub {

Eigen::Index Instance::total_points() const {
    Eigen::Index n = 0;
    for (const auto& s : sets) n += s.rows();
    return n;
}

std::vector<int> Instance::sizes() const {
    std::vector<int> out;
    out.reserve(sets.size());
    for (const auto& s : sets) out.push_back(static_cast<int>(s.rows()));
    return out;
}

void Instance::validate() const {
    if (d < 1) throw std::invalid_argument("instance: embedding dimension must be >= 1");
    if (sets.empty()) throw std::invalid_argument("instance: needs at least one point set");
    for (size_t j = 0; j < sets.size(); ++j) {
        if (sets[j].rows() < 1)
            throw std::invalid_argument("instance: set " + std::to_string(j + 1) + " is empty");
        if (sets[j].cols() != d)
            throw std::invalid_argument("instance: set " + std::to_string(j + 1) + " has " +
                                        std::to_string(sets[j].cols()) +
                                        " coordinates per point, expected d=" + std::to_string(d));
    }
}

std::vector<int> selection_to_global(const Selection& sel, const std::vector<int>& sizes) {
    if (sel.picks.size() != sizes.size())
        throw std::invalid_argument("selection: expected one pick per set");
    std::vector<int> global;
    global.reserve(sizes.size());
    int offset = 0;
    for (size_t j = 0; j < sizes.size(); ++j) {
        const int p = sel.picks[j];
        if (p < 0 || p >= sizes[j])
            throw std::invalid_argument("selection: pick " + std::to_string(p + 1) + " out of range for set " +
                                        std::to_string(j + 1) + " of size " + std::to_string(sizes[j]));
        global.push_back(offset + p);
        offset += sizes[j];
    }
    return global;
}

EDMData build_edm(const Instance& inst) {
    inst.validate();
    const Eigen::Index n = inst.total_points();

    Eigen::MatrixXd pts(n, inst.d);
    EDMData out;
    out.sizes = inst.sizes();
    out.point_index.reserve(static_cast<size_t>(n));
    Eigen::Index row = 0;
    for (int j = 0; j < inst.num_sets(); ++j) {
        const auto& s = inst.sets[static_cast<size_t>(j)];
        pts.middleRows(row, s.rows()) = s;
        for (int i = 0; i < s.rows(); ++i) out.point_index.push_back({j, i});
        row += s.rows();
    }

    out.D.resize(n, n);
    out.D.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dij = (pts.row(i) - pts.row(j)).squaredNorm();
            out.D(i, j) = dij;
            out.D(j, i) = dij;
        }
    }
    out.Dhat = Eigen::MatrixXd::Zero(n + 1, n + 1);
    out.Dhat.bottomRightCorner(n, n) = out.D;
    return out;
}

double objective_value(const EDMData& edm, const Selection& sel) {
    const std::vector<int> idx = selection_to_global(sel, edm.sizes);
    double val = 0.0;
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = a + 1; b < idx.size(); ++b) val += edm.D(idx[a], idx[b]);
    return 2.0 * val;
}

double wasserstein_value(double p_star, int k) {
    if (k < 1) throw std::invalid_argument("wasserstein_value: k must be >= 1");
    return p_star / (2.0 * k);
}

namespace {

// Platform-stable uniform double in [0,1) from the raw engine bits.
double next_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

Instance gen_random(int k, int n, int d, bool vary_sizes, std::uint64_t seed) {
    if (k < 1 || n < 1 || d < 1)
        throw std::invalid_argument("gen_random: k, n, d must all be >= 1");
    if (vary_sizes && n < 3)
        throw std::invalid_argument("gen_random: varying sizes needs n >= 3");

    std::mt19937_64 eng(seed);
    std::vector<int> sizes(static_cast<size_t>(k), n);
    if (vary_sizes) {
        for (int j = 0; j < k; ++j) {
            const int s = n - 2 + static_cast<int>(next_unit(eng) * 5.0);
            sizes[static_cast<size_t>(j)] = std::max(1, s);
        }
    }

    Instance inst;
    inst.d = d;
    std::ostringstream label;
    label << "random-k" << k << "-n" << n << "-d" << d << (vary_sizes ? "-vary" : "") << "-s" << seed;
    inst.label = label.str();
    inst.sets.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        Eigen::MatrixXd s(sizes[static_cast<size_t>(j)], d);
        for (Eigen::Index r = 0; r < s.rows(); ++r)
            for (Eigen::Index c = 0; c < s.cols(); ++c) s(r, c) = next_unit(eng);
        inst.sets.push_back(std::move(s));
    }
    return inst;
}

Instance gen_wheel(int k) {
    if (k < 3) throw std::invalid_argument("gen_wheel: k must be >= 3");
    const double theta = 2.0 * std::numbers::pi / k;
    Eigen::MatrixXd C(k, 2);
    for (int i = 0; i < k; ++i) {
        C(i, 0) = std::cos(i * theta);
        C(i, 1) = std::sin(i * theta);
    }
    // quarter of the chord between adjacent centroids
    const double rk =
        std::sqrt((std::cos(theta) - 1.0) * (std::cos(theta) - 1.0) + std::sin(theta) * std::sin(theta)) / 4.0;

    Instance inst;
    inst.d = 2;
    inst.label = "wheel-k" + std::to_string(k);
    inst.sets.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        Eigen::MatrixXd s(k, 2);
        for (int i = 0; i < k; ++i) s.row(i) = C.row(j) + rk * C.row(i);
        inst.sets.push_back(std::move(s));
    }
    return inst;
}

Instance parse_instance_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin + ": top level must be an object");
    if (!doc.contains("d") || !doc["d"].is_number_integer())
        throw ParseError(origin + ": missing integer field \"d\"");
    if (!doc.contains("sets") || !doc["sets"].is_array())
        throw ParseError(origin + ": missing array field \"sets\"");

    Instance inst;
    inst.d = doc["d"].get<int>();
    inst.label = doc.value("label", std::string{});
    if (inst.d < 1) throw ParseError(origin + ": \"d\" must be >= 1");
    if (doc["sets"].empty()) throw ParseError(origin + ": \"sets\" must hold at least one set");

    int jset = 0;
    for (const auto& set : doc["sets"]) {
        ++jset;
        if (!set.is_array() || set.empty())
            throw ParseError(origin + ": set " + std::to_string(jset) + " must be a nonempty array of points");
        Eigen::MatrixXd s(set.size(), inst.d);
        int ipt = 0;
        for (const auto& pt : set) {
            ++ipt;
            if (!pt.is_array() || static_cast<int>(pt.size()) != inst.d)
                throw ParseError(origin + ": set " + std::to_string(jset) + " point " + std::to_string(ipt) +
                                 " has " + std::to_string(pt.size()) + " coordinates, expected d=" +
                                 std::to_string(inst.d));
            for (int c = 0; c < inst.d; ++c) {
                if (!pt[static_cast<size_t>(c)].is_number())
                    throw ParseError(origin + ": set " + std::to_string(jset) + " point " +
                                     std::to_string(ipt) + " coordinate " + std::to_string(c + 1) +
                                     " is not a number");
                s(ipt - 1, c) = pt[static_cast<size_t>(c)].get<double>();
            }
        }
        inst.sets.push_back(std::move(s));
    }
    inst.validate();
    return inst;
}

std::string instance_to_json(const Instance& inst) {
    nlohmann::json doc;
    doc["label"] = inst.label;
    doc["d"] = inst.d;
    auto sets = nlohmann::json::array();
    for (const auto& s : inst.sets) {
        auto set = nlohmann::json::array();
        for (Eigen::Index r = 0; r < s.rows(); ++r) {
            auto pt = nlohmann::json::array();
            for (Eigen::Index c = 0; c < s.cols(); ++c) pt.push_back(s(r, c));
            set.push_back(std::move(pt));
        }
        sets.push_back(std::move(set));
    }
    doc["sets"] = std::move(sets);
    return doc.dump(2);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str(), path);
}

void save_instance(const Instance& inst, const std::string& path) {
    inst.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << instance_to_json(inst) << '\n';
}

}  // namespace whub
