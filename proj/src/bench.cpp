#include "taupint/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

namespace taupint {

const char* to_string(Method m) { return m == Method::gmres ? "gmres" : "pgmres"; }

Method parse_method(const std::string& s) {
    if (s == "gmres" || s == "plain") return Method::gmres;
    if (s == "pgmres" || s == "preconditioned") return Method::pgmres;
    throw ConfigError("unknown method '" + s + "'");
}

namespace {

SpatialSpec square(SpatialKind kind, std::size_t m1, std::size_t m2) {
    SpatialSpec s;
    s.kind = kind;
    s.axes.resize(2);
    s.axes[0].m = m1;
    s.axes[1].m = m2;
    return s;
}

double zero_initial(std::span<const double>) { return 0.0; }

}  // namespace

ProblemSpec make_example1(double alpha, std::size_t N, std::size_t m1, std::size_t m2) {
    ProblemSpec p;
    p.spatial = square(SpatialKind::laplacian, m1, m2);
    p.alpha = alpha;
    p.N = N;
    p.initial = zero_initial;
    const double ct = 6.0 / std::tgamma(4.0 - alpha);
    auto X = [](double x) { return x * x * x * (1.0 - x) * (1.0 - x); };
    auto Xpp = [](double x) { return 20.0 * x * x * x - 24.0 * x * x + 6.0 * x; };
    p.exact = [X](std::span<const double> x, double t) { return t * t * t * X(x[0]) * X(x[1]); };
    p.source = [=](std::span<const double> x, double t) {
        const double t3 = t * t * t;
        return ct * std::pow(t, 3.0 - alpha) * X(x[0]) * X(x[1]) -
               t3 * (X(x[1]) * Xpp(x[0]) + X(x[0]) * Xpp(x[1]));
    };
    return p;
}

ProblemSpec make_example2(double alpha, double beta1, double beta2, std::size_t N, std::size_t m1,
                          std::size_t m2) {
    ProblemSpec p;
    p.spatial = square(SpatialKind::riesz, m1, m2);
    p.spatial.axes[0].beta = beta1;
    p.spatial.axes[1].beta = beta2;
    p.alpha = alpha;
    p.N = N;
    p.initial = zero_initial;
    auto X = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
    // Left plus right Riemann-Liouville derivative of x^2 (1-x)^2.
    auto both_sides = [](double x, double b) {
        auto one = [b](double y) {
            return 2.0 * std::pow(y, 2.0 - b) / std::tgamma(3.0 - b) -
                   12.0 * std::pow(y, 3.0 - b) / std::tgamma(4.0 - b) +
                   24.0 * std::pow(y, 4.0 - b) / std::tgamma(5.0 - b);
        };
        return one(x) + one(1.0 - x);
    };
    const double g = std::tgamma(alpha + 2.0);
    const double c1 = 1.0 / (2.0 * std::cos(0.5 * beta1 * std::numbers::pi));
    const double c2 = 1.0 / (2.0 * std::cos(0.5 * beta2 * std::numbers::pi));
    p.exact = [X, alpha](std::span<const double> x, double t) {
        return std::pow(t, alpha + 1.0) * X(x[0]) * X(x[1]);
    };
    p.source = [=](std::span<const double> x, double t) {
        const double ta = std::pow(t, alpha + 1.0);
        return ta * (c1 * both_sides(x[0], beta1) * X(x[1]) + c2 * both_sides(x[1], beta2) * X(x[0])) +
               g * t * X(x[0]) * X(x[1]);
    };
    return p;
}

ProblemSpec make_example3(double alpha, double beta1, double beta2, std::size_t N, std::size_t m1,
                          std::size_t m2) {
    constexpr double k1p = 0.4, k1m = 0.7, k2p = 1.2, k2m = 1.5;
    ProblemSpec p;
    p.spatial = square(SpatialKind::riemann_liouville, m1, m2);
    p.spatial.axes[0].beta = beta1;
    p.spatial.axes[1].beta = beta2;
    p.spatial.axes[0].k_plus = k1p;
    p.spatial.axes[0].k_minus = k1m;
    p.spatial.axes[1].k_plus = k2p;
    p.spatial.axes[1].k_minus = k2m;
    p.alpha = alpha;
    p.N = N;
    p.initial = zero_initial;
    auto X = [](double x) {
        const double y = x * (1.0 - x);
        return y * y * y * y;
    };
    // Left Riemann-Liouville derivative of order b of x^4 (1-x)^4, evaluated at psi.
    auto g = [](double psi, double b) {
        static constexpr double binom[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
        double s = 0.0;
        for (int k = 0; k <= 4; ++k) {
            const double p8 = 8.0 - k;
            const double term = binom[k] * std::tgamma(p8 + 1.0) / std::tgamma(p8 + 1.0 - b) * std::pow(psi, p8 - b);
            s += (k % 2 == 0) ? term : -term;
        }
        return s;
    };
    const double ct = 0.5 * std::tgamma(alpha + 3.0);
    p.exact = [X, alpha](std::span<const double> x, double t) {
        return std::pow(t, alpha + 2.0) * X(x[0]) * X(x[1]);
    };
    p.source = [=](std::span<const double> x, double t) {
        const double X1 = X(x[0]), X2 = X(x[1]);
        const double L1 = k1p * g(x[0], beta1) + k1m * g(1.0 - x[0], beta1);
        const double L2 = k2p * g(x[1], beta2) + k2m * g(1.0 - x[1], beta2);
        return ct * t * t * X1 * X2 - std::pow(t, alpha + 2.0) * (L1 * X2 + L2 * X1);
    };
    return p;
}

ProblemSpec make_temporal_order_problem(double alpha, std::size_t N, std::size_t m) {
    ProblemSpec p;
    p.spatial.kind = SpatialKind::laplacian;
    p.spatial.axes.resize(1);
    p.spatial.axes[0].m = m;
    p.alpha = alpha;
    p.N = N;
    p.initial = zero_initial;
    const double ct = 6.0 / std::tgamma(4.0 - alpha);
    p.exact = [](std::span<const double> x, double t) { return t * t * t * x[0] * (1.0 - x[0]); };
    p.source = [=](std::span<const double> x, double t) {
        return ct * std::pow(t, 3.0 - alpha) * x[0] * (1.0 - x[0]) + 2.0 * t * t * t;
    };
    return p;
}

void RunConfig::validate() const {
    if (example < 1 || example > 3) throw ConfigError("example must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (N == 0) throw ConfigError("N must be positive");
    if (m.size() != 2) throw ConfigError("m needs two values (m1,m2)");
    if (m[0] == 0 || m[1] == 0) throw ConfigError("m values must be positive");
    if (example != 1) {
        if (beta.size() != 2) throw ConfigError("beta needs two values (beta1,beta2)");
        for (double b : beta) {
            if (!(b > 1.0 && b < 2.0)) throw ConfigError("beta values must lie in (1,2)");
        }
    }
    if (methods.empty()) throw ConfigError("no solver method selected");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    try {
        gmres.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ProblemSpec RunConfig::problem() const {
    validate();
    switch (example) {
        case 1: return make_example1(alpha, N, m[0], m[1]);
        case 2: return make_example2(alpha, beta[0], beta[1], N, m[0], m[1]);
        default: return make_example3(alpha, beta[0], beta[1], N, m[0], m[1]);
    }
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "example") {
                if (val.is_string()) {
                    const auto s = val.get<std::string>();
                    if (s.rfind("example", 0) != 0) throw ConfigError("unknown problem '" + s + "'");
                    base.example = std::stoi(s.substr(7));
                } else {
                    base.example = val.get<int>();
                }
            } else if (key == "alpha") {
                base.alpha = val.get<double>();
            } else if (key == "beta") {
                base.beta = val.get<std::vector<double>>();
            } else if (key == "N" || key == "n") {
                base.N = val.get<std::size_t>();
            } else if (key == "m") {
                base.m = val.get<std::vector<std::size_t>>();
            } else if (key == "method") {
                const auto s = val.get<std::string>();
                base.methods = s == "both" ? std::vector<Method>{Method::gmres, Method::pgmres}
                                           : std::vector<Method>{parse_method(s)};
            } else if (key == "restart") {
                base.gmres.restart = val.get<std::size_t>();
            } else if (key == "maxit") {
                base.gmres.maxit = val.get<std::size_t>();
            } else if (key == "tol") {
                base.gmres.rel_tol = val.get<double>();
            } else if (key == "residual_norm") {
                const auto s = val.get<std::string>();
                if (s == "preconditioned") base.gmres.residual_norm_mode = ResidualNorm::preconditioned;
                else if (s == "true") base.gmres.residual_norm_mode = ResidualNorm::true_residual;
                else throw ConfigError("residual_norm must be preconditioned or true");
            } else if (key == "time_budget") {
                base.time_budget_s = val.get<double>();
            } else if (key == "out") {
                base.out = val.get<std::string>();
            } else if (key == "format") {
                base.format = val.get<std::string>();
            } else if (key == "oracle") {
                base.oracle = val.get<bool>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return base;
}

double max_error(const ProblemSpec& prob, std::span<const double> u) {
    const auto exact = sample_exact(prob);
    if (exact.size() != u.size()) throw std::invalid_argument("max_error: length mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(exact[i] - u[i]));
    return e;
}

std::vector<TableRow> run_problem(const ProblemSpec& prob, const std::vector<Method>& methods,
                                  const GmresConfig& gmres, double time_budget_s) {
    prob.validate();
    const auto coeffs = l1_coefficients(prob.alpha, prob.N, prob.T_final);
    const AllAtOnceOperator A(assemble_G(prob.spatial), coeffs);
    const auto f = assemble_rhs(prob, coeffs);

    TableRow proto;
    proto.alpha = prob.alpha;
    if (prob.spatial.kind != SpatialKind::laplacian) {
        proto.beta1 = prob.spatial.axes[0].beta;
        proto.beta2 = prob.spatial.dims() > 1 ? prob.spatial.axes[1].beta : proto.beta1;
    }
    proto.h = prob.spatial.axes[0].h();
    proto.mu = coeffs.mu;

    std::vector<TableRow> rows;
    for (Method method : methods) {
        TableRow row = proto;
        row.method = method;
        const auto start = std::chrono::steady_clock::now();
        SolveReport rep;
        if (method == Method::pgmres) {
            const auto P = build_preconditioner(A);
            rep = solve_one_sided(A, P, f, gmres);
        } else {
            GmresConfig cfg = gmres;
            cfg.time_budget_s = time_budget_s;
            rep = solve_unpreconditioned(A, f, cfg);
        }
        row.cpu_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.iters = rep.iterations;
        row.converged = rep.converged;
        row.timed_out = rep.timed_out;
        if (prob.exact) row.error = max_error(prob, rep.solution);
        rows.push_back(row);
    }
    return rows;
}

std::vector<TableRow> run_example(const RunConfig& cfg) {
    return run_problem(cfg.problem(), cfg.methods, cfg.gmres, cfg.time_budget_s);
}

SweepResult run_mesh_independence_sweep(const RunConfig& cfg, const std::vector<std::size_t>& N_ladder) {
    SweepResult out;
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t N : N_ladder) {
        RunConfig c = cfg;
        c.N = N;
        for (auto& row : run_example(c)) {
            if (row.method == Method::pgmres) {
                lo = std::min(lo, row.iters);
                hi = std::max(hi, row.iters);
            }
            out.rows.push_back(row);
        }
    }
    out.pgmres_spread = hi >= lo ? hi - lo : 0;
    return out;
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

std::string format_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "alpha,beta1,beta2,h,mu,method,cpu_s,iters,error,converged\n";
    for (const auto& r : rows) {
        os << fmt("%.6g", r.alpha) << ',' << fmt("%.6g", r.beta1) << ',' << fmt("%.6g", r.beta2) << ','
           << fmt("%.6g", r.h) << ',' << fmt("%.6g", r.mu) << ',' << to_string(r.method) << ',';
        if (r.timed_out) {
            os << "-,-,-,";
        } else {
            os << fmt("%.3f", r.cpu_s) << ',' << r.iters << ',' << fmt("%.4e", r.error) << ',';
        }
        os << (r.converged ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string format_json(const std::vector<TableRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json o;
        o["alpha"] = r.alpha;
        o["beta1"] = r.beta1;
        o["beta2"] = r.beta2;
        o["h"] = r.h;
        o["mu"] = r.mu;
        o["method"] = to_string(r.method);
        if (r.timed_out) {
            o["cpu_s"] = nullptr;
            o["iters"] = nullptr;
            o["error"] = nullptr;
        } else {
            o["cpu_s"] = r.cpu_s;
            o["iters"] = r.iters;
            // Same rounding as the CSV so both outputs carry identical values.
            o["error"] = std::stod(fmt("%.4e", r.error));
        }
        o["converged"] = r.converged;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

void emit_report(const std::vector<TableRow>& rows, const std::string& format, const std::string& path) {
    std::string text;
    if (format == "csv") text = format_csv(rows);
    else if (format == "json") text = format_json(rows);
    else throw ConfigError("format must be csv or json");
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::optional<int> configure_threads_from_env() {
    const char* env = std::getenv("TAUPINT_NUM_THREADS");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("TAUPINT_NUM_THREADS must be a positive integer");
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(n));
#endif
    return static_cast<int>(n);
}

}  // namespace taupint
