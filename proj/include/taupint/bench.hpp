#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "taupint/allatonce.hpp"
#include "taupint/gmres.hpp"

namespace taupint {

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output could not be written (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { gmres, pgmres };

const char* to_string(Method m);
Method parse_method(const std::string& s);

/// Laplacian test problem on (0,1)^2, u = t^3 x1^3 x2^3 (1-x1)^2 (1-x2)^2.
ProblemSpec make_example1(double alpha, std::size_t N, std::size_t m1, std::size_t m2);
/// Riesz test problem on (0,1)^2, u = t^{alpha+1} x1^2 (1-x1)^2 x2^2 (1-x2)^2.
ProblemSpec make_example2(double alpha, double beta1, double beta2, std::size_t N, std::size_t m1,
                          std::size_t m2);
/// Two-sided Riemann-Liouville problem on (0,1)^2 with k = (0.4, 0.7; 1.2, 1.5),
/// u = t^{alpha+2} x1^4 (1-x1)^4 x2^4 (1-x2)^4.
ProblemSpec make_example3(double alpha, double beta1, double beta2, std::size_t N, std::size_t m1,
                          std::size_t m2);
/// 1D Laplacian problem with u = t^3 x (1-x).  Central differences are exact on
/// quadratics in x, so the discrete error is purely temporal.
ProblemSpec make_temporal_order_problem(double alpha, std::size_t N, std::size_t m);

struct RunConfig {
    int example = 1;  ///< 1, 2 or 3
    double alpha = 0.5;
    std::vector<double> beta{1.5, 1.5};
    std::size_t N = 256;
    std::vector<std::size_t> m{31, 31};
    std::vector<Method> methods{Method::pgmres};
    GmresConfig gmres;
    /// Wall-clock budget for unpreconditioned runs; <= 0 disables it.
    double time_budget_s = 300.0;
    std::string out;
    std::string format = "csv";
    bool oracle = false;

    /// Throws ConfigError.
    void validate() const;
    [[nodiscard]] ProblemSpec problem() const;
};

/// Reads a flat JSON object whose keys mirror RunConfig; absent keys keep the
/// values already in `base`.  Throws ConfigError or IoError.
RunConfig load_run_config(const std::string& path, RunConfig base = {});

struct TableRow {
    double alpha = 0.0;
    double beta1 = 2.0;
    double beta2 = 2.0;
    double h = 0.0;
    double mu = 0.0;
    Method method = Method::pgmres;
    double cpu_s = 0.0;
    std::size_t iters = 0;
    double error = 0.0;  ///< max over all space-time nodes of |u* - u|
    bool converged = false;
    bool timed_out = false;  ///< printed as '-' like a run stopped by hand
};

/// Solves one problem with each requested method.
std::vector<TableRow> run_problem(const ProblemSpec& prob, const std::vector<Method>& methods,
                                  const GmresConfig& gmres, double time_budget_s);

std::vector<TableRow> run_example(const RunConfig& cfg);

struct SweepResult {
    std::vector<TableRow> rows;
    std::size_t pgmres_spread = 0;  ///< max - min preconditioned iteration count
};

/// Runs cfg once per time-step count in N_ladder, spatial grid fixed.
SweepResult run_mesh_independence_sweep(const RunConfig& cfg, const std::vector<std::size_t>& N_ladder);

/// Max-norm error between a solver-ordered solution and the sampled exact solution.
double max_error(const ProblemSpec& prob, std::span<const double> u);

std::string format_csv(const std::vector<TableRow>& rows);
std::string format_json(const std::vector<TableRow>& rows);
/// format is "csv" or "json"; an empty path writes to stdout.  Throws IoError.
void emit_report(const std::vector<TableRow>& rows, const std::string& format, const std::string& path);

/// Applies TAUPINT_NUM_THREADS to the OpenMP runtime when set; returns the
/// requested count or nullopt.
std::optional<int> configure_threads_from_env();

}  // namespace taupint
