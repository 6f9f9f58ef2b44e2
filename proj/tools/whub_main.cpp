#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "whub/bounds.hpp"
#include "whub/facial.hpp"
#include "whub/instance.hpp"
#include "whub/oracle.hpp"
#include "whub/report_json.hpp"
#include "whub/solver.hpp"

namespace {

struct SolverFlags {
    double eps = 1e-12;
    double eta = 1e-10;
    long maxiter = 0;
    double gamma = 0.9;
    double beta0 = 0.0;
    bool freeze_beta = false;
    double alpha = 0.0;
    double delta = 1.0;
    bool log = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--eps", f.eps, "relative duality-gap tolerance");
    cmd->add_option("--eta", f.eta, "KKT residual tolerance");
    cmd->add_option("--maxiter", f.maxiter, "iteration cap (0: 1e4 + k(N+1))");
    cmd->add_option("--gamma", f.gamma, "dual step fraction in (0,1)");
    cmd->add_option("--beta0", f.beta0, "initial penalty (0: max(floor((N+1)/k),1))");
    cmd->add_flag("--freeze-beta", f.freeze_beta, "disable adaptive penalty");
    cmd->add_option("--alpha", f.alpha, "objective diagonal shift (enables scaling)");
    cmd->add_option("--delta", f.delta, "objective scale factor > 0 (enables scaling)");
    cmd->add_flag("--log", f.log, "print one progress line per bound evaluation to stderr");
}

bool env_log_enabled() {
    const char* v = std::getenv("WHUB_LOG");
    return v != nullptr && v[0] != '\0' && std::string(v) != "0";
}

whub::SolverConfig make_config(const CLI::App* cmd, const SolverFlags& f) {
    whub::SolverConfig cfg;
    cfg.eps = f.eps;
    cfg.eta = f.eta;
    cfg.maxiter = f.maxiter;
    cfg.gamma = f.gamma;
    cfg.beta0 = f.beta0;
    cfg.freeze_beta = f.freeze_beta;
    if (cmd->count("--alpha") > 0 || cmd->count("--delta") > 0) {
        cfg.scaled = true;
        cfg.alpha = f.alpha;
        cfg.delta = f.delta;
    }
    if (f.log || env_log_enabled()) cfg.log = &std::cerr;
    return cfg;
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error(out_path + ": cannot open file for writing");
    out << text << '\n';
}

void dump_v_pattern(const whub::FacialBasis& basis, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out.precision(17);
    for (int c = 0; c < basis.V.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(basis.V, c); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

// comma lists with ranges, e.g. "2,3" or "8..10"
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoi(item));
        } else {
            const int lo = std::stoi(item.substr(0, dots));
            const int hi = std::stoi(item.substr(dots + 2));
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        }
    }
    if (out.empty()) throw std::runtime_error("empty list: '" + text + "'");
    return out;
}

int run_generate_wheel(int k, const std::string& out_path, const std::string& label) {
    whub::Instance inst = whub::gen_wheel(k);
    if (!label.empty()) inst.label = label;
    whub::save_instance(inst, out_path);
    std::cout << "N=" << inst.total_points() << " k=" << inst.num_sets() << " d=" << inst.d << " -> "
              << out_path << '\n';
    return 0;
}

int run_generate_random(int k, int n, int d, bool vary, std::uint64_t seed,
                        const std::string& out_path, const std::string& label) {
    whub::Instance inst = whub::gen_random(k, n, d, vary, seed);
    if (!label.empty()) inst.label = label;
    whub::save_instance(inst, out_path);
    std::cout << "N=" << inst.total_points() << " k=" << inst.num_sets() << " d=" << inst.d << " -> "
              << out_path << '\n';
    return 0;
}

int run_solve(const CLI::App* cmd, const std::string& instance_path, const SolverFlags& flags,
              const std::string& out_path, const std::string& dump_v) {
    const whub::Instance inst = whub::load_instance(instance_path);
    const whub::EDMData edm = whub::build_edm(inst);
    const whub::FacialBasis basis = whub::build_facial_basis(edm.sizes);
    const whub::GangsterIndex gang = whub::build_gangster(edm.sizes);
    if (!dump_v.empty()) dump_v_pattern(basis, dump_v);

    const whub::SolverConfig cfg = make_config(cmd, flags);
    const whub::SolveReport rep = whub::solve(edm, basis, gang, cfg);
    write_text(out_path, whub::solve_report_to_json(rep, edm.num_sets()));

    std::ostringstream gap;
    gap.setf(std::ios::scientific);
    gap.precision(1);
    gap << rep.rel_gap;
    std::cerr << "lb=" << rep.lb << " ub=" << rep.ub << " relGap=" << gap.str() << " iters="
              << rep.iterations << " stop=" << rep.stop_reason << '\n';
    return rep.rel_gap <= rep.config.eps ? 0 : 2;
}

int run_oracle(const CLI::App* cmd, const std::string& instance_path, const SolverFlags& flags,
               double tol_opt, const std::string& out_path) {
    const whub::Instance inst = whub::load_instance(instance_path);
    const whub::EDMData edm = whub::build_edm(inst);
    const double count = whub::selection_count(edm.sizes);
    if (count > 1e8) {
        std::cerr << "error: " << count << " selections exceed the enumeration guard of 1e8\n";
        return 1;
    }
    const whub::FacialBasis basis = whub::build_facial_basis(edm.sizes);
    const whub::GangsterIndex gang = whub::build_gangster(edm.sizes);
    const whub::SolveReport rep = whub::solve(edm, basis, gang, make_config(cmd, flags));
    const whub::GapReport gr = whub::gap_check(edm, rep.lb, tol_opt);
    write_text(out_path, whub::gap_report_to_json(gr));
    return 0;
}

struct BenchRow {
    int d = 0, k = 0, n = 0;
    double n_mean = 0.0;
    int N = 0;
    double wall = 0.0, rel_gap = 0.0;
    int rank_y = 0;
    std::string stop = "error";
};

int run_bench(const std::string& d_list, const std::string& k_list, const std::string& n_list,
              std::uint64_t seed, bool vary, int jobs, const std::string& out_path) {
    const std::vector<int> ds = parse_int_list(d_list);
    const std::vector<int> ks = parse_int_list(k_list);
    const std::vector<int> ns = parse_int_list(n_list);

    struct Cell {
        int d, k, n;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    std::uint64_t idx = 0;
    for (int d : ds)
        for (int k : ks)
            for (int n : ns) cells.push_back({d, k, n, seed + idx++});

    std::vector<BenchRow> rows(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            BenchRow& row = rows[i];
            row.d = c.d;
            row.k = c.k;
            row.n = c.n;
            try {
                const whub::Instance inst = whub::gen_random(c.k, c.n, c.d, vary, c.seed);
                const whub::EDMData edm = whub::build_edm(inst);
                row.N = static_cast<int>(edm.n());
                row.n_mean = double(row.N) / c.k;
                const whub::FacialBasis basis = whub::build_facial_basis(edm.sizes);
                const whub::GangsterIndex gang = whub::build_gangster(edm.sizes);
                const whub::SolveReport rep = whub::solve(edm, basis, gang, {});
                row.wall = rep.wall_seconds;
                row.rel_gap = rep.rel_gap;
                row.rank_y = rep.rank_y;
                row.stop = rep.stop_reason;
            } catch (const std::exception& e) {
                row.stop = "error";
                std::cerr << "bench cell d=" << c.d << " k=" << c.k << " n=" << c.n
                          << " failed: " << e.what() << '\n';
            }
        }
    };
    const int nthreads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv.precision(17);
    csv << "d,k,n,N,wallSeconds,relGap,rankY,stopReason\n";
    for (const BenchRow& row : rows) {
        csv << row.d << ',' << row.k << ',' << (vary ? row.n_mean : double(row.n)) << ',' << row.N
            << ',' << row.wall << ',' << row.rel_gap << ',' << row.rank_y << ',' << row.stop << '\n';
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error(out_path + ": cannot open file for writing");
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simplified Wasserstein barycenter (cheapest hub) solver"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write an instance file");
    gen->require_subcommand(1);
    int gw_k = 0;
    std::string gw_out, gw_label;
    auto* gw = gen->add_subcommand("wheel", "wheel-of-wheels instance (k sets of k planar points)");
    gw->add_option("--k", gw_k, "number of sets")->required();
    gw->add_option("--out", gw_out, "output path")->required();
    gw->add_option("--label", gw_label, "instance label");

    int gr_k = 0, gr_n = 0, gr_d = 0;
    bool gr_vary = false;
    std::uint64_t gr_seed = 0;
    std::string gr_out, gr_label;
    auto* gr = gen->add_subcommand("random", "uniform random points in [0,1]^d");
    gr->add_option("--k", gr_k, "number of sets")->required();
    gr->add_option("--n", gr_n, "points per set")->required();
    gr->add_option("--d", gr_d, "embedding dimension")->required();
    gr->add_flag("--vary-sizes", gr_vary, "draw set sizes uniformly from [n-2, n+2]");
    gr->add_option("--seed", gr_seed, "RNG seed");
    gr->add_option("--out", gr_out, "output path")->required();
    gr->add_option("--label", gr_label, "instance label");

    // solve
    std::string sol_instance, sol_out, sol_dump_v;
    SolverFlags sol_flags;
    auto* sol = app.add_subcommand("solve", "run the splitting solver on an instance file");
    sol->add_option("instance", sol_instance, "instance JSON path")->required();
    add_solver_flags(sol, sol_flags);
    sol->add_option("--out", sol_out, "write result JSON here instead of stdout");
    sol->add_option("--dump-v", sol_dump_v, "write the facial basis sparsity pattern (i j value lines)");

    // oracle
    std::string orc_instance, orc_out;
    SolverFlags orc_flags;
    double orc_tol = 1e-9;
    auto* orc = app.add_subcommand("oracle", "brute-force optimum and duality-gap analysis");
    orc->add_option("instance", orc_instance, "instance JSON path")->required();
    add_solver_flags(orc, orc_flags);
    orc->add_option("--tol-opt", orc_tol, "relative tolerance for counting ties as optima");
    orc->add_option("--out", orc_out, "write gap report JSON here instead of stdout");

    // bench
    std::string ben_d = "2", ben_k = "8", ben_n = "7", ben_out;
    std::uint64_t ben_seed = 0;
    bool ben_vary = false;
    int ben_jobs = 1;
    auto* ben = app.add_subcommand("bench", "solve a grid of random instances, emit CSV");
    ben->add_option("--d", ben_d, "dimensions, e.g. 2,3");
    ben->add_option("--k", ben_k, "set counts, e.g. 8..10");
    ben->add_option("--n", ben_n, "sizes, e.g. 7..13");
    ben->add_option("--seed", ben_seed, "base seed; cells use consecutive seeds");
    ben->add_flag("--vary-sizes", ben_vary, "draw set sizes uniformly from [n-2, n+2]");
    ben->add_option("--jobs", ben_jobs, "parallel grid cells");
    ben->add_option("--out", ben_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gw->parsed()) return run_generate_wheel(gw_k, gw_out, gw_label);
        if (gr->parsed())
            return run_generate_random(gr_k, gr_n, gr_d, gr_vary, gr_seed, gr_out, gr_label);
        if (sol->parsed()) return run_solve(sol, sol_instance, sol_flags, sol_out, sol_dump_v);
        if (orc->parsed()) return run_oracle(orc, orc_instance, orc_flags, orc_tol, orc_out);
        if (ben->parsed())
            return run_bench(ben_d, ben_k, ben_n, ben_seed, ben_vary, ben_jobs, ben_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
