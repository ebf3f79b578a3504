#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taupint/bench.hpp"
#include "test_util.hpp"

using namespace taupint;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

// Residual of the exact solution in the discrete system, max norm.
double consistency_residual(const ProblemSpec& prob) {
    const auto c = l1_coefficients(prob.alpha, prob.N, prob.T_final);
    const AllAtOnceOperator op(assemble_G(prob.spatial), c);
    const auto u = sample_exact(prob);
    const auto Au = apply_A(op, u);
    const auto f = assemble_rhs(prob, c);
    return testutil::max_abs_diff(Au, f);
}

}  // namespace

TEST(Examples, LaplacianSourceAtCenter) {
    const auto p = make_example1(0.5, 4, 3, 3);
    const std::vector<double> x{0.5, 0.5};
    EXPECT_NEAR(p.source(x, 1.0), 6.0 / (std::tgamma(3.5) * 1024.0) + 1.0 / 32.0, 1e-14);
    EXPECT_NEAR(p.exact(x, 1.0), 1.0 / 1024.0, 1e-16);
    EXPECT_DOUBLE_EQ(p.initial(x), 0.0);
}

TEST(Examples, DiscreteResidualOfExactSolutionShrinks) {
    // Truncation error is O(mu^{2-alpha} + h^2); refine both together.
    for (int ex : {1, 2, 3}) {
        auto make = [ex](std::size_t N, std::size_t m) {
            if (ex == 1) return make_example1(0.5, N, m, m);
            if (ex == 2) return make_example2(0.5, 1.5, 1.5, N, m, m);
            return make_example3(0.5, 1.2, 1.8, N, m, m);
        };
        const double coarse = consistency_residual(make(8, 7));
        const double fine = consistency_residual(make(32, 15));
        EXPECT_LT(fine, 0.6 * coarse) << ex;
    }
}

TEST(Examples, TemporalProblemIsExactInSpace) {
    const auto p = make_temporal_order_problem(0.5, 16, 7);
    ASSERT_EQ(p.spatial.dims(), 1u);
    const std::vector<double> x{0.25};
    EXPECT_NEAR(p.exact(x, 0.5), 0.125 * 0.25 * 0.75, 1e-16);
}

TEST(RunProblem, LaplacianSmallGrid) {
    const auto rows = run_problem(make_example1(0.5, 16, 7, 7), {Method::gmres, Method::pgmres}, {}, 0.0);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.converged);
        EXPECT_DOUBLE_EQ(r.h, 0.125);
        EXPECT_DOUBLE_EQ(r.mu, 1.0 / 16.0);
        EXPECT_LT(r.error, 1e-3);
    }
    EXPECT_LT(rows[1].iters, rows[0].iters);
    // Both solve the same system to 1e-8, so the discretization error agrees.
    EXPECT_NEAR(rows[0].error, rows[1].error, 1e-3 * rows[1].error);
}

TEST(RunProblem, TimedOutRowIsMarked) {
    const auto rows = run_problem(make_example1(0.5, 64, 31, 31), {Method::gmres}, {}, 1e-6);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].timed_out);
    EXPECT_FALSE(rows[0].converged);
}

TEST(Sweep, SpreadIsMaxMinusMin) {
    RunConfig cfg;
    cfg.example = 1;
    cfg.alpha = 0.5;
    cfg.m = {7, 7};
    const auto res = run_mesh_independence_sweep(cfg, {4, 8, 16});
    ASSERT_EQ(res.rows.size(), 3u);
    std::size_t lo = 1000, hi = 0;
    for (const auto& r : res.rows) {
        lo = std::min(lo, r.iters);
        hi = std::max(hi, r.iters);
    }
    EXPECT_EQ(res.pgmres_spread, hi - lo);
}

TEST(Format, CsvHeaderAndRows) {
    EXPECT_EQ(format_csv({}), "alpha,beta1,beta2,h,mu,method,cpu_s,iters,error,converged\n");
    TableRow r;
    r.alpha = 0.2;
    r.h = 1.0 / 32;
    r.mu = 1.0 / 256;
    r.cpu_s = 1.23456;
    r.iters = 5;
    r.error = 5.388e-6;
    r.converged = true;
    const auto cells = split_csv(format_csv({r}));
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_EQ(cells[1], (std::vector<std::string>{"0.2", "2", "2", "0.03125", "0.00390625", "pgmres", "1.235", "5",
                                                  "5.3880e-06", "true"}));
    r.timed_out = true;
    r.method = Method::gmres;
    r.converged = false;
    const auto t = split_csv(format_csv({r}));
    EXPECT_EQ(t[1][6], "-");
    EXPECT_EQ(t[1][7], "-");
    EXPECT_EQ(t[1][8], "-");
    EXPECT_EQ(t[1][9], "false");
}

TEST(Format, JsonRoundTrip) {
    TableRow a;
    a.alpha = 0.8;
    a.beta1 = 1.2;
    a.beta2 = 1.2;
    a.iters = 29;
    a.error = 4.1081e-6;
    a.converged = true;
    TableRow b = a;
    b.method = Method::gmres;
    b.timed_out = true;
    const auto j = nlohmann::json::parse(format_json({a, b}));
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["iters"].get<int>(), 29);
    EXPECT_DOUBLE_EQ(j[0]["error"].get<double>(), 4.1081e-6);
    EXPECT_EQ(j[0]["method"], "pgmres");
    EXPECT_TRUE(j[1]["iters"].is_null());
    EXPECT_TRUE(j[1]["error"].is_null());
    EXPECT_EQ(j[1]["method"], "gmres");
}

TEST(Format, EmitReportErrors) {
    EXPECT_THROW(emit_report({}, "xml", ""), ConfigError);
    EXPECT_THROW(emit_report({}, "csv", "/nonexistent-dir/x/out.csv"), IoError);
    const auto p = std::filesystem::temp_directory_path() / "taupint_emit.csv";
    emit_report({}, "csv", p.string());
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "alpha,beta1,beta2,h,mu,method,cpu_s,iters,error,converged");
}

TEST(Methods, ParseAndPrint) {
    EXPECT_EQ(parse_method("gmres"), Method::gmres);
    EXPECT_EQ(parse_method("pgmres"), Method::pgmres);
    EXPECT_STREQ(to_string(Method::pgmres), "pgmres");
    EXPECT_THROW(parse_method("cg"), ConfigError);
}

TEST(Config, LoadsAndOverrides) {
    const auto p = temp_file("taupint_cfg.json",
                             R"({"example": "example3", "alpha": 0.3, "beta": [1.2, 1.8], "N": 64,
                                 "m": [15, 15], "method": "both", "restart": 30, "tol": 1e-9})");
    const auto cfg = load_run_config(p.string());
    EXPECT_EQ(cfg.example, 3);
    EXPECT_DOUBLE_EQ(cfg.alpha, 0.3);
    EXPECT_EQ(cfg.beta, (std::vector<double>{1.2, 1.8}));
    EXPECT_EQ(cfg.N, 64u);
    EXPECT_EQ(cfg.methods.size(), 2u);
    EXPECT_EQ(cfg.gmres.restart, 30u);
    EXPECT_DOUBLE_EQ(cfg.gmres.rel_tol, 1e-9);
    EXPECT_NO_THROW(cfg.validate());
    const auto prob = cfg.problem();
    EXPECT_EQ(prob.spatial.kind, SpatialKind::riemann_liouville);
    EXPECT_DOUBLE_EQ(prob.spatial.axes[1].beta, 1.8);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(load_run_config("/nonexistent/cfg.json"), IoError);
    EXPECT_THROW(load_run_config(temp_file("taupint_bad1.json", "{not json").string()), ConfigError);
    EXPECT_THROW(load_run_config(temp_file("taupint_bad2.json", R"({"alpha": "x"})").string()), ConfigError);
    EXPECT_THROW(load_run_config(temp_file("taupint_bad3.json", R"({"colour": 1})").string()), ConfigError);
    RunConfig cfg;
    cfg.alpha = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.example = 4;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.example = 2;
    cfg.beta = {2.5, 1.5};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Golden, SmallLaplacianTable) {
    // Deterministic columns of a small run; cpu_s is excluded.
    std::ifstream in(std::string(TAUPINT_GOLDEN_DIR) + "/example1_small.csv");
    ASSERT_TRUE(in) << "missing golden file";
    std::stringstream ss;
    ss << in.rdbuf();
    const auto golden = split_csv(ss.str());

    std::vector<TableRow> rows;
    for (double alpha : {0.2, 0.5, 0.8}) {
        for (auto& r : run_problem(make_example1(alpha, 16, 7, 7), {Method::gmres, Method::pgmres}, {}, 0.0)) {
            rows.push_back(r);
        }
    }
    const auto got = split_csv(format_csv(rows));
    ASSERT_EQ(got.size(), golden.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        ASSERT_EQ(got[i].size(), golden[i].size());
        for (std::size_t k = 0; k < got[i].size(); ++k) {
            if (i > 0 && k == 6) continue;
            EXPECT_EQ(got[i][k], golden[i][k]) << "row " << i << " column " << k;
        }
    }
}
