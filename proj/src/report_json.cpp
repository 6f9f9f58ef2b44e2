#include "whub/report_json.hpp"

#include <json.hpp>

namespace whub {

namespace {

nlohmann::json selection_one_based(const Selection& sel) {
    auto arr = nlohmann::json::array();
    for (int p : sel.picks) arr.push_back(p + 1);
    return arr;
}

}  // namespace

std::string solve_report_to_json(const SolveReport& report, int k, int indent) {
    nlohmann::json doc;
    doc["lb"] = report.lb;
    doc["ub"] = report.ub;
    doc["relGap"] = report.rel_gap;
    doc["selection"] = selection_one_based(report.selection);
    doc["pW"] = wasserstein_value(report.ub, k);
    doc["iterations"] = report.iterations;
    doc["stopReason"] = report.stop_reason;
    doc["rankY"] = report.rank_y;
    doc["wallSeconds"] = report.wall_seconds;

    nlohmann::json cfg;
    cfg["eps"] = report.config.eps;
    cfg["eta"] = report.config.eta;
    cfg["maxiter"] = report.config.maxiter;
    cfg["gamma"] = report.config.gamma;
    cfg["beta0"] = report.config.beta0;
    cfg["freezeBeta"] = report.config.freeze_beta;
    cfg["mu"] = report.config.mu;
    cfg["tauInc"] = report.config.tau_inc;
    cfg["tauDec"] = report.config.tau_dec;
    cfg["stallMax"] = report.config.stall_max;
    cfg["boundEvery"] = report.config.bound_every;
    cfg["scaled"] = report.config.scaled;
    cfg["alpha"] = report.config.alpha;
    cfg["delta"] = report.config.delta;
    doc["config"] = std::move(cfg);
    return doc.dump(indent);
}

std::string gap_report_to_json(const GapReport& report, int indent) {
    nlohmann::json doc;
    doc["bruteForceAvailable"] = report.brute_available;
    if (report.brute_available) {
        doc["pStar"] = report.p_star;
        doc["optimaCount"] = report.optima.size();
        auto arr = nlohmann::json::array();
        for (const auto& sel : report.optima) arr.push_back(selection_one_based(sel));
        doc["optima"] = std::move(arr);
        doc["liftedRank"] = report.lifted_rank;
        doc["sumPositive"] = report.sum_positive;
        doc["rankSufficient"] = report.rank_sufficient;
        doc["nonOptimalExists"] = report.non_optimal_exists;
        doc["gapCertified"] = report.gap_certified;
        doc["empiricalGap"] = report.empirical_gap;
    } else {
        doc["empiricalGap"] = nullptr;
        doc["gapCertified"] = false;
    }
    doc["threshold"] = report.threshold;
    doc["solverLb"] = report.solver_lb;
    return doc.dump(indent);
}

}  // namespace whub
