#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "test_util.hpp"

#ifndef WHUB_BIN
#define WHUB_BIN "whub"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = "/tmp/whub_cli_out.txt";
    const std::string err_path = "/tmp/whub_cli_err.txt";
    const std::string cmd =
        env_prefix + std::string(WHUB_BIN) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ostringstream o, e;
    o << std::ifstream(out_path).rdbuf();
    e << std::ifstream(err_path).rdbuf();
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ostringstream s;
    s << std::ifstream(path).rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("generate wheel writes a valid instance") {
    const RunResult r = run("generate wheel --k 3 --out /tmp/whub_cli_w3.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("N=9 k=3 d=2") != std::string::npos);
    const whub::Instance inst = whub::load_instance("/tmp/whub_cli_w3.json");
    CHECK(inst.total_points() == 9);
}

TEST_CASE("generate wheel rejects k below three") {
    const RunResult r = run("generate wheel --k 2 --out /tmp/whub_cli_w2.json");
    CHECK(r.exit_code != 0);
}

TEST_CASE("generate random is deterministic") {
    run("generate random --k 8 --n 7 --d 2 --seed 1 --vary-sizes --out /tmp/whub_cli_r1.json");
    run("generate random --k 8 --n 7 --d 2 --seed 1 --vary-sizes --out /tmp/whub_cli_r2.json");
    CHECK(slurp("/tmp/whub_cli_r1.json") == slurp("/tmp/whub_cli_r2.json"));
    CHECK(!slurp("/tmp/whub_cli_r1.json").empty());
}

TEST_CASE("solve reports the documented schema and exit codes") {
    const std::string fixture = testutil::data_path("wheel3.json");

    SUBCASE("persistent gap exits 2") {
        const RunResult r = run("solve " + fixture);
        CHECK(r.exit_code == 2);
        const auto doc = nlohmann::json::parse(r.out);
        const std::set<std::string> keys{"lb",         "ub",    "relGap",      "selection",
                                         "pW",         "iterations", "stopReason", "rankY",
                                         "wallSeconds", "config"};
        for (const auto& k : keys) CHECK(doc.contains(k));
        CHECK(doc["selection"].size() == 3);
        CHECK(doc["pW"].get<double>() ==
              doctest::Approx(doc["ub"].get<double>() / 6.0).epsilon(1e-15));
        CHECK(doc["relGap"].get<double>() > 1e-3);
        // gap echoed in scientific notation on stderr
        CHECK(r.err.find("relGap=") != std::string::npos);
        CHECK(r.err.find("e-") != std::string::npos);
    }

    SUBCASE("solved instance exits 0") {
        run("generate random --k 4 --n 3 --d 2 --seed 2 --out /tmp/whub_cli_r4.json");
        const RunResult r = run("solve /tmp/whub_cli_r4.json");
        CHECK(r.exit_code == 0);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["relGap"].get<double>() <= 1e-12);
        CHECK(doc["stopReason"].get<std::string>() == "gap");
    }

    SUBCASE("missing file exits 1") {
        const RunResult r = run("solve /tmp/whub_cli_missing.json");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("error:") != std::string::npos);
    }

    SUBCASE("result round-trips through --out") {
        const RunResult r = run("solve " + fixture + " --out /tmp/whub_cli_res.json");
        CHECK(r.exit_code == 2);
        const auto doc = nlohmann::json::parse(slurp("/tmp/whub_cli_res.json"));
        CHECK(doc.contains("lb"));
    }

    SUBCASE("scaling flags solve to the same selection") {
        run("generate random --k 4 --n 3 --d 2 --seed 2 --out /tmp/whub_cli_r4.json");
        const RunResult plain = run("solve /tmp/whub_cli_r4.json");
        const RunResult scaled = run("solve /tmp/whub_cli_r4.json --alpha 1 --delta 2");
        CHECK(scaled.exit_code == 0);
        const auto a = nlohmann::json::parse(plain.out);
        const auto b = nlohmann::json::parse(scaled.out);
        CHECK(b["config"]["scaled"].get<bool>());
        const bool same_sel = a["selection"] == b["selection"];
        CHECK(same_sel);
        CHECK(std::abs(a["ub"].get<double>() - b["ub"].get<double>()) <= 1e-7);
    }

    SUBCASE("log flag and WHUB_LOG produce progress lines") {
        const RunResult with_flag = run("solve " + fixture + " --log");
        CHECK(with_flag.err.find("iter beta r sR sY lb ub relgap") != std::string::npos);
        const RunResult with_env = run("solve " + fixture, "WHUB_LOG=1 ");
        CHECK(with_env.err.find("iter beta r sR sY lb ub relgap") != std::string::npos);
        const RunResult without = run("solve " + fixture);
        CHECK(without.err.find("iter beta") == std::string::npos);
    }

    SUBCASE("facial basis pattern dump") {
        run("solve " + fixture + " --dump-v /tmp/whub_cli_v.txt");
        std::ifstream v("/tmp/whub_cli_v.txt");
        int i, j;
        double val;
        size_t lines = 0;
        while (v >> i >> j >> val) {
            CHECK(i >= 0);
            CHECK(i <= 9);
            CHECK(j >= 0);
            CHECK(j <= 6);
            ++lines;
        }
        CHECK(lines > 0);
    }
}

TEST_CASE("oracle reports the gap analysis") {
    const RunResult r = run("oracle " + testutil::data_path("wheel3.json"));
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["optimaCount"].get<int>() == 1);
    const bool optimum_matches = doc["optima"][0] == nlohmann::json::array({2, 3, 2});
    CHECK(optimum_matches);
    CHECK(doc["gapCertified"].get<bool>() == false);
    const double eg = doc["empiricalGap"].get<double>();
    CHECK(eg > 0.31);
    CHECK(eg < 0.36);
}

TEST_CASE("oracle refuses oversized enumerations") {
    run("generate random --k 9 --n 10 --d 2 --seed 3 --out /tmp/whub_cli_big.json");
    const RunResult r = run("oracle /tmp/whub_cli_big.json");
    CHECK(r.exit_code == 1);
    const bool mentions_guard = r.err.find("guard") != std::string::npos;
    CHECK(mentions_guard);
}

TEST_CASE("bench emits a sorted csv with stable values") {
    const RunResult a = run("bench --d 2 --k 3 --n 2,3 --seed 5 --out /tmp/whub_cli_b1.csv");
    CHECK(a.exit_code == 0);
    const RunResult b = run("bench --d 2 --k 3 --n 2,3 --seed 5 --jobs 2 --out /tmp/whub_cli_b2.csv");
    CHECK(b.exit_code == 0);
    const std::string csv = slurp("/tmp/whub_cli_b1.csv");
    CHECK(csv.rfind("d,k,n,N,wallSeconds,relGap,rankY,stopReason\n", 0) == 0);
    size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 3);  // header + 2 cells

    // wall time differs between runs; every other column must not
    auto strip_wall = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, out;
        while (std::getline(in, line)) {
            std::vector<std::string> cols;
            std::istringstream ls(line);
            for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
            if (cols.size() == 8) cols[4] = "-";
            for (size_t i = 0; i < cols.size(); ++i) out += cols[i] + (i + 1 < cols.size() ? "," : "");
            out += '\n';
        }
        return out;
    };
    CHECK(strip_wall(csv) == strip_wall(slurp("/tmp/whub_cli_b2.csv")));
}

TEST_CASE("single-cell bench") {
    const RunResult r = run("bench --d 2 --k 2 --n 2 --seed 6");
    CHECK(r.exit_code == 0);
    size_t rows = 0;
    for (char c : r.out)
        if (c == '\n') ++rows;
    CHECK(rows == 2);
}

TEST_SUITE_END();
