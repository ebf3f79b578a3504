#include "taupint/gmres.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace taupint {

void GmresConfig::validate() const {
    if (restart == 0) throw std::invalid_argument("GmresConfig: restart must be >= 1");
    if (maxit == 0) throw std::invalid_argument("GmresConfig: maxit must be >= 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("GmresConfig: rel_tol must be positive");
}

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

using Clock = std::chrono::steady_clock;

class Solver {
public:
    Solver(const LinearMap& op, const LinearMap& prec, std::span<const double> b, const GmresConfig& cfg)
        : op_(op), prec_(prec), b_(b), cfg_(cfg), n_(b.size()), work_(n_), resid_(n_) {}

    // Writes M^{-1}(b - A x) into out and returns (||b - A x||, ||M^{-1}(b - A x)||).
    std::pair<double, double> residuals(std::span<const double> x, std::span<double> out) {
        op_(x, work_);
        for (std::size_t i = 0; i < n_; ++i) work_[i] = b_[i] - work_[i];
        const double tn = norm2(work_);
        if (prec_) {
            prec_(work_, out);
        } else {
            std::copy(work_.begin(), work_.end(), out.begin());
        }
        return {tn, norm2(out)};
    }

    double pick(std::pair<double, double> norms) const {
        return cfg_.residual_norm_mode == ResidualNorm::true_residual ? norms.first : norms.second;
    }

    void precondition(std::span<const double> in, std::span<double> out) {
        if (prec_) {
            prec_(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    }

    void apply(std::span<const double> in, std::span<double> out) {
        op_(in, work_);
        precondition(work_, out);
    }

    std::size_t n() const { return n_; }
    std::span<double> resid() { return resid_; }

private:
    const LinearMap& op_;
    const LinearMap& prec_;
    std::span<const double> b_;
    const GmresConfig& cfg_;
    std::size_t n_;
    std::vector<double> work_;
    std::vector<double> resid_;
};

// Solves the k x k upper triangular system R y = g (R column-major in H with
// leading dimension ld) and adds V y to x.
void update_solution(const std::vector<double>& H, std::size_t ld, const std::vector<double>& g,
                     std::size_t k, const std::vector<std::vector<double>>& V, std::span<double> x) {
    std::vector<double> y(k);
    for (std::size_t ii = k; ii-- > 0;) {
        double s = g[ii];
        for (std::size_t j = ii + 1; j < k; ++j) s -= H[ii + j * ld] * y[j];
        y[ii] = s / H[ii + ii * ld];
    }
    for (std::size_t j = 0; j < k; ++j) axpy(y[j], V[j], x);
}

}  // namespace

SolveReport gmres(const LinearMap& apply_op, const LinearMap& apply_prec, std::span<const double> b,
                  std::span<const double> x0, const GmresConfig& cfg) {
    cfg.validate();
    if (!apply_op) throw std::invalid_argument("gmres: missing operator");
    const std::size_t n = b.size();
    if (!x0.empty() && x0.size() != n) throw std::invalid_argument("gmres: x0 has wrong length");

    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SolveReport rep;
    rep.solution.assign(n, 0.0);
    if (!x0.empty()) std::copy(x0.begin(), x0.end(), rep.solution.begin());
    std::span<double> x = rep.solution;

    Solver S(apply_op, apply_prec, b, cfg);
    std::vector<double> scratch(n);

    // Breakdown is judged against the right-hand side of the system GMRES sees.
    S.precondition(b, scratch);
    const double breakdown_tol = 1e-14 * norm2(scratch);

    auto norms0 = S.residuals(x, S.resid());
    const double ref = S.pick(norms0);
    rep.residual_history.push_back(norms0.second);
    if (cfg.record_history) {
        rep.true_history.push_back(norms0.first);
        rep.preconditioned_history.push_back(norms0.second);
    }
    if (ref == 0.0) {
        rep.converged = true;
        rep.wall_seconds = elapsed();
        return rep;
    }
    const double target = cfg.rel_tol * ref;
    const bool need_explicit = cfg.record_history || cfg.residual_norm_mode == ResidualNorm::true_residual;

    const std::size_t m = std::min(cfg.restart, n);
    const std::size_t ld = m + 1;
    std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
    std::vector<double> H(ld * m), cs(m), sn(m), g(m + 1);
    std::vector<double> trial(need_explicit ? n : 0);

    auto norms = norms0;
    while (rep.cycles < cfg.maxit) {
        // r = M^{-1}(b - A x) sits in S.resid() on entry.
        const double beta = norms.second;
        std::fill(H.begin(), H.end(), 0.0);
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        for (std::size_t i = 0; i < n; ++i) V[0][i] = S.resid()[i] / beta;

        std::size_t k = 0;
        bool inner_done = false;
        while (k < m && !inner_done) {
            S.apply(V[k], V[k + 1]);
            auto& w = V[k + 1];
            for (std::size_t j = 0; j <= k; ++j) {
                const double h = dot(w, V[j]);
                H[j + k * ld] = h;
                axpy(-h, V[j], w);
            }
            const double hk = norm2(w);
            H[k + 1 + k * ld] = hk;
            for (std::size_t j = 0; j < k; ++j) {
                const double a = H[j + k * ld];
                const double c = H[j + 1 + k * ld];
                H[j + k * ld] = cs[j] * a + sn[j] * c;
                H[j + 1 + k * ld] = -sn[j] * a + cs[j] * c;
            }
            const double a = H[k + k * ld];
            const double r = std::hypot(a, hk);
            cs[k] = a / r;
            sn[k] = hk / r;
            H[k + k * ld] = r;
            H[k + 1 + k * ld] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            ++k;
            ++rep.iterations;

            const double est = std::abs(g[k]);
            rep.residual_history.push_back(est);
            bool hit = cfg.residual_norm_mode == ResidualNorm::preconditioned && est <= target;
            if (need_explicit) {
                std::copy(x.begin(), x.end(), trial.begin());
                update_solution(H, ld, g, k, V, trial);
                const auto tn = S.residuals(trial, scratch);
                if (cfg.record_history) {
                    rep.true_history.push_back(tn.first);
                    rep.preconditioned_history.push_back(tn.second);
                }
                if (cfg.residual_norm_mode == ResidualNorm::true_residual) hit = tn.first <= target;
            }

            if (hk <= breakdown_tol) {
                rep.breakdown = true;
                inner_done = true;
            } else if (hit) {
                inner_done = true;
            } else if (cfg.time_budget_s > 0.0 && elapsed() > cfg.time_budget_s) {
                rep.timed_out = true;
                inner_done = true;
            } else if (k < m) {
                for (double& v : w) v /= hk;
            }
        }

        update_solution(H, ld, g, k, V, x);
        ++rep.cycles;
        norms = S.residuals(x, S.resid());
        rep.relative_residual = S.pick(norms) / ref;
        if (S.pick(norms) <= target) {
            rep.converged = true;
            break;
        }
        if (rep.breakdown || rep.timed_out) break;
    }
    rep.wall_seconds = elapsed();
    return rep;
}

SolveReport solve_one_sided(const AllAtOnceOperator& A, const TauPinTPreconditioner& P,
                            std::span<const double> f, const GmresConfig& cfg) {
    const LinearMap op = [&A](std::span<const double> x, std::span<double> y) { A.apply(x, y); };
    const LinearMap prec = [&P](std::span<const double> x, std::span<double> y) { P.apply_inv(x, y); };
    return gmres(op, prec, f, {}, cfg);
}

SolveReport solve_unpreconditioned(const AllAtOnceOperator& A, std::span<const double> f,
                                   const GmresConfig& cfg) {
    const LinearMap op = [&A](std::span<const double> x, std::span<double> y) { A.apply(x, y); };
    return gmres(op, LinearMap{}, f, {}, cfg);
}

SolveReport solve_two_sided(const AllAtOnceOperator& A, const TauPinTPreconditioner& P,
                            std::span<const double> f, const GmresConfig& cfg) {
    std::vector<double> t1(A.size()), t2(A.size());
    const LinearMap op = [&](std::span<const double> x, std::span<double> y) {
        P.apply_inv_sqrt(x, t1);
        A.apply(t1, t2);
        P.apply_inv_sqrt(t2, y);
    };
    const auto rhs = apply_P_inv_sqrt(P, f);
    SolveReport rep = gmres(op, LinearMap{}, rhs, {}, cfg);
    const auto w = rep.solution;
    P.apply_inv_sqrt(w, rep.solution);
    return rep;
}

}  // namespace taupint
