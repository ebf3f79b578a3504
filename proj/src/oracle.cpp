#include "taupint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "taupint/l1.hpp"
#include "taupint/tau.hpp"

namespace taupint {

namespace {

DenseMatrix sym(const DenseMatrix& M) { return 0.5 * (M + M.transpose()); }
DenseMatrix skew(const DenseMatrix& M) { return 0.5 * (M - M.transpose()); }

DenseMatrix kron(const DenseMatrix& X, const DenseMatrix& Y) {
    DenseMatrix K(X.rows() * Y.rows(), X.cols() * Y.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
        }
    }
    return K;
}

Eigen::VectorXd generalized_eigs(const DenseMatrix& A, const DenseMatrix& B) {
    Eigen::LLT<DenseMatrix> llt(B);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("generalized_eigs: B is not SPD");
    Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(A, B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("generalized_eigs: solver failed");
    return es.eigenvalues();
}

Eigen::VectorXd symmetric_eigs(const DenseMatrix& A) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric_eigs: solver failed");
    return es.eigenvalues();
}

DenseMatrix temporal_tau(double alpha, std::size_t N) {
    const auto coeffs = l1_coefficients(alpha, N, 1.0);
    const auto HB = symmetric_part(build_B(coeffs));
    return tau_dense(HB.first_column(), N);
}

// Checks ||r_k|| <= omega^k ||r_0|| along a GMRES history, returning the worst
// ratio ||r_k|| / (omega^k ||r_0||) seen.
double worst_contraction(const std::vector<double>& hist, double omega, bool& ok) {
    ok = true;
    double worst = 0.0;
    const double r0 = hist.front();
    double bound = r0;
    for (std::size_t k = 1; k < hist.size(); ++k) {
        bound *= omega;
        if (hist[k] > bound + kOracleSlack * r0) ok = false;
        if (bound > 0.0) worst = std::max(worst, hist[k] / bound);
    }
    return worst;
}

LinearMap dense_map(const DenseMatrix& M) {
    return [&M](std::span<const double> x, std::span<double> y) {
        Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())) =
            M * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    };
}

}  // namespace

double compose_b_check(double a_check) { return std::min(a_check, 0.5); }
double compose_b_hat(double a_hat) { return std::max(a_hat, 1.5); }

double omega_practical(double varsigma) {
    const double s2 = varsigma * varsigma;
    return std::sqrt((2.0 + 4.0 * s2) / (3.0 + 4.0 * s2));
}

double omega_ideal(double epsilon) { return epsilon / std::sqrt(1.0 + epsilon * epsilon); }

DenseMatrix spd_inv_sqrt(const DenseMatrix& M) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(M);
    if (es.info() != Eigen::Success) throw std::runtime_error("spd_inv_sqrt: solver failed");
    if (es.eigenvalues().minCoeff() <= 0.0) throw std::invalid_argument("spd_inv_sqrt: matrix is not SPD");
    return es.operatorInverseSqrt();
}

double skew_radius(const DenseMatrix& K) {
    const Eigen::VectorXd ev = symmetric_eigs(K.transpose() * K);
    return std::sqrt(std::max(0.0, ev.maxCoeff()));
}

CheckReport check_localization(const Toeplitz1D& Tf, const Toeplitz1D& Tg, std::size_t grid) {
    if (Tf.size() != Tg.size()) throw std::invalid_argument("check_localization: size mismatch");
    if (!Tf.is_symmetric() || !Tg.is_symmetric()) {
        throw std::invalid_argument("check_localization: symbols must be real (symmetric Toeplitz)");
    }
    const DenseMatrix F = materialize(Tf);
    const DenseMatrix Gm = materialize(Tg);
    if (Eigen::LLT<DenseMatrix>(Gm).info() != Eigen::Success) {
        throw std::invalid_argument("check_localization: T_g is not SPD");
    }
    double r = std::numeric_limits<double>::infinity();
    double R = -r;
    for (std::size_t i = 0; i < grid; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double g = block_symbol_eval(Tg, theta).real();
        if (g <= 0.0) continue;  // essential bounds ignore the zeros of g
        const double q = block_symbol_eval(Tf, theta).real() / g;
        r = std::min(r, q);
        R = std::max(R, q);
    }
    const Eigen::VectorXd ev = generalized_eigs(F, Gm);
    CheckReport rep;
    rep.name = "localization";
    rep.values = {{"n", static_cast<double>(Tf.size())}, {"r", r}, {"R", R},
                  {"eig_min", ev.minCoeff()}, {"eig_max", ev.maxCoeff()}};
    rep.passed = ev.minCoeff() >= r - kOracleSlack && ev.maxCoeff() <= R + kOracleSlack;
    if (!rep.passed) rep.message = "generalized eigenvalues leave the symbol range";
    return rep;
}

CheckReport check_tau_algebra(std::size_t m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> t(m), v(m);
    for (auto& x : t) x = dist(rng);
    for (auto& x : v) x = dist(rng);

    const auto back = dst1(dst1(v));
    double inv_err = 0.0;
    for (std::size_t i = 0; i < m; ++i) inv_err = std::max(inv_err, std::abs(back[i] - v[i]));

    auto direct = tau_eigenvalues(t).eigs;
    auto fast = tau_eigs_fast(t).eigs;
    const Eigen::VectorXd dense = symmetric_eigs(tau_dense(t));
    double fast_err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        fast_err = std::max(fast_err, std::abs(fast[i] - direct[i]));
        scale = std::max(scale, std::abs(direct[i]));
    }
    std::sort(direct.begin(), direct.end());
    double dense_err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        dense_err = std::max(dense_err, std::abs(dense[static_cast<Eigen::Index>(i)] - direct[i]));
    }
    scale = std::max(scale, 1.0);

    CheckReport rep;
    rep.name = "tau_algebra";
    rep.values = {{"m", static_cast<double>(m)},
                  {"dst_involution_err", inv_err},
                  {"dense_vs_formula_err", dense_err / scale},
                  {"fast_vs_formula_err", fast_err / scale}};
    rep.passed = inv_err <= 1e-12 && dense_err / scale <= 1e-9 && fast_err / scale <= 1e-10;
    if (!rep.passed) rep.message = "tau algebra identities violated";
    return rep;
}

CheckReport check_temporal_equivalence(double alpha, std::size_t N) {
    const auto coeffs = l1_coefficients(alpha, N, 1.0);
    const DenseMatrix HB = sym(materialize(build_B(coeffs)));
    const DenseMatrix tau = temporal_tau(alpha, N);
    const Eigen::VectorXd ev = generalized_eigs(HB, tau);
    CheckReport rep;
    rep.name = "temporal_equivalence";
    rep.values = {{"alpha", alpha}, {"N", static_cast<double>(N)},
                  {"eig_min", ev.minCoeff()}, {"eig_max", ev.maxCoeff()}};
    rep.passed = ev.minCoeff() > 0.5 && ev.maxCoeff() < 1.5;
    if (!rep.passed) rep.message = "eigenvalues outside (1/2, 3/2)";
    return rep;
}

CheckReport check_diag_dominance(double alpha, std::size_t N) {
    const DenseMatrix P = temporal_tau(alpha, N);
    bool signs = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            if (i == j) continue;
            if (P(i, j) > 0.0) signs = false;
            off += std::abs(P(i, j));
        }
        if (!(P(i, i) > 0.0)) signs = false;
        min_margin = std::min(min_margin, P(i, i) - off);
    }
    CheckReport rep;
    rep.name = "diag_dominance";
    rep.values = {{"alpha", alpha}, {"N", static_cast<double>(N)}, {"min_margin", min_margin}};
    rep.passed = signs && min_margin > 0.0;
    if (!signs) rep.message = "sign pattern violated";
    else if (!rep.passed) rep.message = "row not strictly dominant";
    return rep;
}

double measure_mu_beta(const SpatialOperator& G, std::size_t grid) {
    double mu = 0.0;
    for (const auto& T : G.blocks()) {
        if (T.is_symmetric()) continue;
        for (std::size_t i = 1; i <= grid; ++i) {
            const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid);
            // w(-theta) is the conjugate of w(theta), so [0, pi] covers the circle.
            const auto w = block_symbol_eval(T, theta);
            if (w.real() <= 0.0) return std::numeric_limits<double>::infinity();
            mu = std::max(mu, std::abs(w.imag()) / w.real());
        }
    }
    return mu;
}

CheckReport check_symbol_quotients(const SpatialSpec& spatial, double alpha, SpectralBounds& bounds,
                                   std::size_t grid, std::size_t K) {
    const double tanb = std::tan(0.5 * alpha * std::numbers::pi);
    const auto count = static_cast<std::ptrdiff_t>(grid);
    double q_max = 0.0, tail_max = 0.0, re_min = std::numeric_limits<double>::infinity();
    bool ok = true;
#pragma omp parallel for schedule(dynamic) reduction(max : q_max, tail_max) reduction(min : re_min) \
    reduction(&& : ok)
    for (std::ptrdiff_t i = 1; i <= count; ++i) {
        const double phi = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid);
        const auto g = g_alpha_eval(phi, alpha, K);
        const double tail = g.tail_bound();
        const double re = g.value.real();
        const double im = std::abs(g.value.imag());
        if (!(re - tail > 0.0)) ok = false;
        if (im > tanb * re + (1.0 + tanb) * tail + kOracleSlack) ok = false;
        q_max = std::max(q_max, im / re);
        tail_max = std::max(tail_max, tail);
        re_min = std::min(re_min, re - tail);
    }
    const SpatialOperator G = assemble_G(spatial);
    bounds.mu_beta = measure_mu_beta(G, grid);
    bounds.eta = std::max(bounds.mu_beta, tanb);

    CheckReport rep;
    rep.name = "symbol_quotients";
    rep.values = {{"alpha", alpha},         {"tan_bound", tanb},   {"quotient_max", q_max},
                  {"tail_max", tail_max},   {"re_min", re_min},    {"mu_beta", bounds.mu_beta},
                  {"eta", bounds.eta},      {"K", static_cast<double>(K)}};
    rep.passed = ok && std::isfinite(bounds.mu_beta);
    if (!ok) rep.message = "temporal symbol quotient exceeds tan(alpha pi/2) beyond the tail budget";
    else if (!rep.passed) rep.message = "spatial symbol has nonpositive real part";
    return rep;
}

DenseMatrix dense_spatial_preconditioner(const SpatialOperator& G, std::size_t cap) {
    require_dense_size(G.size(), cap);
    const auto J = static_cast<Eigen::Index>(G.size());
    DenseMatrix P = DenseMatrix::Zero(J, J);
    // x_1 is fastest, so axis i sits between I_{after} and I_{before}.
    Eigen::Index before = 1;
    for (std::size_t i = 0; i < G.dims(); ++i) {
        const auto& T = G.block(i);
        const auto mi = static_cast<Eigen::Index>(T.size());
        const Eigen::Index after = J / (before * mi);
        const DenseMatrix tau = tau_dense(symmetric_part(T).first_column(), cap);
        P += kron(DenseMatrix::Identity(after, after), kron(tau, DenseMatrix::Identity(before, before)));
        before *= mi;
    }
    return P;
}

DenseMatrix dense_preconditioner(const AllAtOnceOperator& op, std::size_t cap) {
    require_dense_size(op.size(), cap);
    const DenseMatrix Pt = dense_spatial_preconditioner(op.G(), cap);
    const DenseMatrix tauB = tau_dense(symmetric_part(op.B()).first_column(), cap);
    const auto N = static_cast<Eigen::Index>(op.N());
    const auto J = static_cast<Eigen::Index>(op.J());
    return kron(Pt, DenseMatrix::Identity(N, N)) + op.kappa() * kron(DenseMatrix::Identity(J, J), tauB);
}

CheckReport check_practical_bounds(const AllAtOnceOperator& op, std::span<const double> f, double alpha,
                                   SpectralBounds& bounds, const GmresConfig& cfg) {
    const double tanb = std::tan(0.5 * alpha * std::numbers::pi);
    const DenseMatrix A = op.dense();
    const DenseMatrix P = dense_preconditioner(op);
    const bool p_spd = Eigen::LLT<DenseMatrix>(P).info() == Eigen::Success;
    const DenseMatrix Pis = spd_inv_sqrt(P);
    const Eigen::VectorXd ev = symmetric_eigs(Pis * sym(A) * Pis);
    const double skew_rho = skew_radius(Pis * skew(A) * Pis);

    const DenseMatrix Gd = op.G().dense();
    const DenseMatrix Pt = dense_spatial_preconditioner(op.G());
    const Eigen::VectorXd ea = generalized_eigs(sym(Gd), Pt);
    bounds.a_check = ea.minCoeff();
    bounds.a_hat = ea.maxCoeff();
    bounds.c_check = symmetric_eigs(Pt).minCoeff();
    bounds.b_check = compose_b_check(bounds.a_check);
    bounds.b_hat = compose_b_hat(bounds.a_hat);
    const bool symmetric_G = op.G().is_symmetric();
    if (!symmetric_G) {
        if (bounds.mu_beta <= 0.0) bounds.mu_beta = measure_mu_beta(op.G());
        const DenseMatrix His = spd_inv_sqrt(sym(Gd));
        bounds.mu_beta_matrix = skew_radius(His * skew(Gd) * His);
    } else {
        bounds.mu_beta = 0.0;
        bounds.mu_beta_matrix = 0.0;
    }
    bounds.varsigma = symmetric_G ? 1.5 * tanb : std::max(bounds.mu_beta * bounds.a_hat, 1.5 * tanb);
    bounds.omega_practical = omega_practical(bounds.varsigma);

    const TauPinTPreconditioner Pfast = build_preconditioner(op);
    const SolveReport sol = solve_two_sided(op, Pfast, f, cfg);
    bool contraction_ok = false;
    const double worst = worst_contraction(sol.residual_history, bounds.omega_practical, contraction_ok);

    const bool eig_ok = ev.minCoeff() > bounds.b_check - kOracleSlack && ev.maxCoeff() < bounds.b_hat + kOracleSlack;
    const bool skew_ok = skew_rho <= bounds.varsigma + kOracleSlack;
    const bool omega_ok = bounds.omega_practical >= std::sqrt(2.0 / 3.0) - 1e-12 && bounds.omega_practical < 1.0;

    CheckReport rep;
    rep.name = "practical_bounds";
    rep.values = {{"alpha", alpha},
                  {"N", static_cast<double>(op.N())},
                  {"J", static_cast<double>(op.J())},
                  {"eig_min", ev.minCoeff()},
                  {"eig_max", ev.maxCoeff()},
                  {"a_check", bounds.a_check},
                  {"a_hat", bounds.a_hat},
                  {"b_check", bounds.b_check},
                  {"b_hat", bounds.b_hat},
                  {"c_check", bounds.c_check},
                  {"mu_beta", bounds.mu_beta},
                  {"mu_beta_matrix", bounds.mu_beta_matrix},
                  {"skew_radius", skew_rho},
                  {"varsigma", bounds.varsigma},
                  {"omega", bounds.omega_practical},
                  {"gmres_iterations", static_cast<double>(sol.iterations)},
                  {"worst_contraction_ratio", worst},
                  {"P_spd", p_spd ? 1.0 : 0.0}};
    rep.passed = p_spd && eig_ok && skew_ok && omega_ok && contraction_ok && sol.converged;
    if (!p_spd) rep.message = "P is not SPD";
    else if (!eig_ok) rep.message = "preconditioned symmetric part leaves (b_check, b_hat)";
    else if (!skew_ok) rep.message = "skew radius exceeds varsigma";
    else if (!omega_ok) rep.message = "omega outside [sqrt(2/3), 1)";
    else if (!contraction_ok) rep.message = "residual history exceeds omega^k r_0";
    else if (!sol.converged) rep.message = "two-sided GMRES did not converge";
    return rep;
}

CheckReport check_ideal_contraction(const DenseMatrix& A, std::span<const double> f, SpectralBounds& bounds,
                                    const GmresConfig& cfg) {
    const DenseMatrix H = sym(A);
    const DenseMatrix His = spd_inv_sqrt(H);
    bounds.epsilon = skew_radius(His * skew(A) * His);
    bounds.omega_ideal = omega_ideal(bounds.epsilon);
    const DenseMatrix Z = His * A * His;
    const Eigen::VectorXd rhs = His * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    const SolveReport sol = gmres(dense_map(Z), LinearMap{}, std::span<const double>(rhs.data(), rhs.size()), {}, cfg);
    bool ok = false;
    const double worst = worst_contraction(sol.residual_history, bounds.omega_ideal, ok);

    CheckReport rep;
    rep.name = "ideal_contraction";
    rep.values = {{"n", static_cast<double>(A.rows())},
                  {"epsilon", bounds.epsilon},
                  {"omega", bounds.omega_ideal},
                  {"gmres_iterations", static_cast<double>(sol.iterations)},
                  {"worst_contraction_ratio", worst}};
    rep.passed = ok && sol.converged;
    if (!ok) rep.message = "residual history exceeds omega^k r_0";
    else if (!sol.converged) rep.message = "GMRES did not converge";
    return rep;
}

CheckReport check_residual_relation(const AllAtOnceOperator& op, const TauPinTPreconditioner& P,
                                    std::span<const double> f, std::size_t steps) {
    GmresConfig cfg;
    cfg.restart = steps;
    cfg.maxit = 1;
    cfg.rel_tol = 1e-10;
    const SolveReport one = solve_one_sided(op, P, f, cfg);
    const SolveReport two = solve_two_sided(op, P, f, cfg);
    const double lam_min = symmetric_eigs(dense_preconditioner(op)).minCoeff();
    const double factor = 1.0 / std::sqrt(lam_min);
    const std::size_t len = std::min(one.residual_history.size(), two.residual_history.size());
    const double r0 = one.residual_history.front();
    bool ok = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const double bound = factor * two.residual_history[j];
        if (one.residual_history[j] > bound + kOracleSlack * r0) ok = false;
        if (bound > 0.0) worst = std::max(worst, one.residual_history[j] / bound);
    }
    CheckReport rep;
    rep.name = "residual_relation";
    rep.values = {{"lambda_min_P", lam_min},
                  {"steps_compared", static_cast<double>(len)},
                  {"worst_ratio", worst}};
    rep.passed = ok && len > 1;
    if (!rep.passed) rep.message = "one-sided residual exceeds the two-sided bound";
    return rep;
}

CheckReport check_weighted_mean_inequality(std::span<const double> xi, std::span<const double> zeta) {
    if (xi.size() != zeta.size() || xi.empty()) {
        throw std::invalid_argument("check_weighted_mean_inequality: need equal nonempty sequences");
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sx = 0.0, sz = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (xi[i] < 0.0 || !(zeta[i] > 0.0)) {
            throw std::invalid_argument("check_weighted_mean_inequality: need xi >= 0 and zeta > 0");
        }
        lo = std::min(lo, xi[i] / zeta[i]);
        hi = std::max(hi, xi[i] / zeta[i]);
        sx += xi[i];
        sz += zeta[i];
    }
    const double mean = sx / sz;
    const double tol = 1e-14 * std::max(1.0, std::abs(hi));
    CheckReport rep;
    rep.name = "weighted_mean";
    rep.values = {{"min_ratio", lo}, {"mean", mean}, {"max_ratio", hi}};
    rep.passed = lo - tol <= mean && mean <= hi + tol;
    return rep;
}

}  // namespace taupint
