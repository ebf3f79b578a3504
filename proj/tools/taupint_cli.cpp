// Command-line driver: solve the benchmark problems, run mesh sweeps and the
// dense verification suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "taupint/bench.hpp"
#include "taupint/oracle.hpp"

namespace {

using namespace taupint;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

template <class T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            if constexpr (std::is_floating_point_v<T>) out.push_back(std::stod(item));
            else out.push_back(static_cast<T>(std::stoull(item)));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse list item '" + item + "' in '" + s + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct SolveFlags {
    std::string config;
    int example = 0;
    double alpha = -1.0;
    std::string beta, m, method, out, format;
    std::size_t n = 0, restart = 0, maxit = 0;
    double tol = 0.0;
    double time_budget = -1.0;
    std::string residual_norm;
    std::string n_ladder;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("--config", f.config, "JSON file with RunConfig fields; flags override it");
    cmd->add_option("--example", f.example, "benchmark problem 1, 2 or 3");
    cmd->add_option("--alpha", f.alpha, "Caputo order in (0,1)");
    cmd->add_option("--beta", f.beta, "fractional orders B1,B2");
    cmd->add_option("--n", f.n, "number of time steps N");
    cmd->add_option("--m", f.m, "interior points M1,M2");
    cmd->add_option("--method", f.method, "gmres, pgmres or both");
    cmd->add_option("--out", f.out, "output path (stdout when omitted)");
    cmd->add_option("--format", f.format, "csv or json");
    cmd->add_option("--restart", f.restart, "GMRES restart length");
    cmd->add_option("--maxit", f.maxit, "maximum restart cycles");
    cmd->add_option("--tol", f.tol, "relative residual tolerance");
    cmd->add_option("--time-budget", f.time_budget, "seconds before an unpreconditioned run is stopped");
    cmd->add_option("--residual-norm", f.residual_norm, "preconditioned or true");
}

RunConfig build_config(const SolveFlags& f) {
    RunConfig c;
    if (!f.config.empty()) c = load_run_config(f.config, c);
    if (f.example != 0) c.example = f.example;
    if (f.alpha >= 0.0) c.alpha = f.alpha;
    if (!f.beta.empty()) c.beta = parse_list<double>(f.beta);
    if (f.n != 0) c.N = f.n;
    if (!f.m.empty()) c.m = parse_list<std::size_t>(f.m);
    if (!f.method.empty()) {
        c.methods = f.method == "both" ? std::vector<Method>{Method::gmres, Method::pgmres}
                                       : std::vector<Method>{parse_method(f.method)};
    }
    if (!f.out.empty()) c.out = f.out;
    if (!f.format.empty()) c.format = f.format;
    if (f.restart != 0) c.gmres.restart = f.restart;
    if (f.maxit != 0) c.gmres.maxit = f.maxit;
    if (f.tol > 0.0) c.gmres.rel_tol = f.tol;
    if (f.time_budget >= 0.0) c.time_budget_s = f.time_budget;
    if (!f.residual_norm.empty()) {
        if (f.residual_norm == "preconditioned") c.gmres.residual_norm_mode = ResidualNorm::preconditioned;
        else if (f.residual_norm == "true") c.gmres.residual_norm_mode = ResidualNorm::true_residual;
        else throw ConfigError("--residual-norm must be preconditioned or true");
    }
    c.validate();
    return c;
}

nlohmann::json report_json(const CheckReport& r) {
    nlohmann::json j;
    j["check"] = r.name;
    j["passed"] = r.passed;
    j["values"] = r.values;
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

void run_tau_suite(std::vector<CheckReport>& out) {
    for (std::size_t m : {1, 2, 3, 7, 31, 64, 255, 1000}) out.push_back(check_tau_algebra(m));
}

void run_temporal_suite(std::vector<CheckReport>& out) {
    for (int a = 1; a <= 9; ++a) {
        for (std::size_t N = 4; N <= 256; N *= 2) out.push_back(check_temporal_equivalence(0.1 * a, N));
    }
    for (double alpha : {0.2, 0.9}) out.push_back(check_diag_dominance(alpha, 128));
}

void run_spectral_suite(std::vector<CheckReport>& out) {
    constexpr std::size_t N = 8, m = 9;
    for (int example = 1; example <= 3; ++example) {
        for (double alpha : {0.2, 0.5, 0.8}) {
            RunConfig c;
            c.example = example;
            c.alpha = alpha;
            c.N = N;
            c.m = {m, m};
            c.beta = example == 3 ? std::vector<double>{1.2, 1.8} : std::vector<double>{1.5, 1.5};
            const ProblemSpec prob = c.problem();
            const auto coeffs = l1_coefficients(alpha, N, prob.T_final);
            const AllAtOnceOperator A(assemble_G(prob.spatial), coeffs);
            const auto f = assemble_rhs(prob, coeffs);
            const auto P = build_preconditioner(A);
            SpectralBounds bounds;
            out.push_back(check_symbol_quotients(prob.spatial, alpha, bounds, kSymbolGrid, 20000));
            out.push_back(check_practical_bounds(A, f, alpha, bounds));
            out.push_back(check_ideal_contraction(A.dense(), f, bounds));
            out.push_back(check_residual_relation(A, P, f));
            for (auto* r : {&out[out.size() - 4], &out[out.size() - 3], &out[out.size() - 2], &out.back()}) {
                r->values["example"] = example;
            }
        }
    }
}

int run_verify(const std::string& suite, const std::string& path) {
    std::vector<CheckReport> reports;
    if (suite == "tau" || suite == "all") run_tau_suite(reports);
    if (suite == "temporal" || suite == "all") run_temporal_suite(reports);
    if (suite == "spectral" || suite == "all") run_spectral_suite(reports);
    if (reports.empty()) throw ConfigError("unknown suite '" + suite + "'");

    nlohmann::json arr = nlohmann::json::array();
    bool all_ok = true;
    for (const auto& r : reports) {
        arr.push_back(report_json(r));
        all_ok = all_ok && r.passed;
        if (!r.passed) std::cerr << "FAIL " << r.name << ": " << r.message << "\n";
    }
    const std::string text = arr.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream os(path);
        if (!os) throw IoError("cannot open '" + path + "' for writing");
        os << text;
        if (!os) throw IoError("write to '" + path + "' failed");
    }
    std::cerr << reports.size() << " checks, " << (all_ok ? "all passed" : "some failed") << "\n";
    return all_ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tau-preconditioned all-at-once solver for time-fractional diffusion"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "solve one benchmark configuration and emit table rows");
    add_solve_flags(solve, solve_flags);

    SolveFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "repeat a configuration over a ladder of time-step counts");
    add_solve_flags(sweep, sweep_flags);
    sweep->add_option("--n-ladder", sweep_flags.n_ladder, "comma-separated N values")->required();

    std::string suite = "all", verify_out;
    auto* verify = app.add_subcommand("verify", "run the dense spectral verification suites");
    verify->add_option("--suite", suite, "tau, temporal, spectral or all");
    verify->add_option("--out", verify_out, "JSON report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        configure_threads_from_env();
        if (*solve) {
            const RunConfig cfg = build_config(solve_flags);
            emit_report(run_example(cfg), cfg.format, cfg.out);
        } else if (*sweep) {
            const RunConfig cfg = build_config(sweep_flags);
            const auto result = run_mesh_independence_sweep(cfg, parse_list<std::size_t>(sweep_flags.n_ladder));
            emit_report(result.rows, cfg.format, cfg.out);
            std::cerr << "pgmres iteration spread: " << result.pgmres_spread << "\n";
        } else if (*verify) {
            return run_verify(suite, verify_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
