#include "taupint/allatonce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pencil.hpp"
#include "taupint/errors.hpp"
#include "taupint/tau.hpp"

namespace taupint {

void ProblemSpec::validate() const {
    spatial.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ProblemSpec: alpha must lie in (0,1)");
    if (!(T_final > 0.0)) throw std::invalid_argument("ProblemSpec: T_final must be positive");
    if (N == 0) throw std::invalid_argument("ProblemSpec: N must be positive");
    if (!source) throw std::invalid_argument("ProblemSpec: missing source term");
    if (!initial) throw std::invalid_argument("ProblemSpec: missing initial condition");
}

void grid_point(const SpatialSpec& spec, std::size_t j, std::span<double> x) {
    if (x.size() != spec.dims()) throw std::invalid_argument("grid_point: wrong coordinate count");
    for (std::size_t i = 0; i < spec.dims(); ++i) {
        const auto& a = spec.axes[i];
        x[i] = a.node(j % a.m);
        j /= a.m;
    }
}

AllAtOnceOperator::AllAtOnceOperator(SpatialOperator G, const L1Coefficients& coeffs)
    : G_(std::move(G)), B_(build_B(coeffs)), kappa_(coeffs.kappa), N_(coeffs.N) {
    extents_.push_back(N_);
    for (auto e : G_.extents()) extents_.push_back(e);
}

void AllAtOnceOperator::apply(std::span<const double> u, std::span<double> y) const {
    if (u.size() != size() || y.size() != size()) {
        throw std::invalid_argument("AllAtOnceOperator::apply: dimension mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    detail::accumulate_axis_toeplitz(B_.as_toeplitz(), u, y, extents_, 0, kappa_);
    for (std::size_t i = 0; i < G_.dims(); ++i) {
        detail::accumulate_axis_toeplitz(G_.block(i), u, y, extents_, i + 1, 1.0);
    }
}

DenseMatrix AllAtOnceOperator::dense(std::size_t cap) const {
    require_dense_size(size(), cap);
    const DenseMatrix Gd = G_.dense(cap);
    const DenseMatrix Bd = materialize(B_, cap);
    const auto n = static_cast<Eigen::Index>(N_);
    const auto J = static_cast<Eigen::Index>(G_.size());
    DenseMatrix A = DenseMatrix::Zero(n * J, n * J);
    for (Eigen::Index j = 0; j < J; ++j) {
        for (Eigen::Index k = 0; k < J; ++k) {
            if (Gd(j, k) == 0.0) continue;
            for (Eigen::Index t = 0; t < n; ++t) A(t + n * j, t + n * k) += Gd(j, k);
        }
        A.block(n * j, n * j, n, n) += kappa_ * Bd;
    }
    return A;
}

std::vector<double> apply_A(const AllAtOnceOperator& op, std::span<const double> u) {
    std::vector<double> y(op.size());
    op.apply(u, y);
    return y;
}

std::vector<double> assemble_rhs(const ProblemSpec& prob, const L1Coefficients& coeffs) {
    prob.validate();
    if (coeffs.N != prob.N) throw std::invalid_argument("assemble_rhs: N mismatch");
    const std::size_t J = prob.spatial.total_points();
    const std::size_t N = prob.N;
    std::vector<double> f(N * J);
    std::vector<double> x(prob.spatial.dims());
    for (std::size_t j = 0; j < J; ++j) {
        grid_point(prob.spatial, j, x);
        const double psi = prob.initial(x);
        for (std::size_t n = 1; n <= N; ++n) {
            const double t = static_cast<double>(n) * coeffs.mu;
            f[(n - 1) + N * j] = prob.source(x, t) - coeffs.initial_weight(n) * psi;
        }
    }
    return f;
}

std::vector<double> sample_exact(const ProblemSpec& prob) {
    if (!prob.exact) throw std::invalid_argument("sample_exact: problem has no exact solution");
    const std::size_t J = prob.spatial.total_points();
    const std::size_t N = prob.N;
    const double mu = prob.T_final / static_cast<double>(N);
    std::vector<double> u(N * J);
    std::vector<double> x(prob.spatial.dims());
    for (std::size_t j = 0; j < J; ++j) {
        grid_point(prob.spatial, j, x);
        for (std::size_t n = 1; n <= N; ++n) u[(n - 1) + N * j] = prob.exact(x, static_cast<double>(n) * mu);
    }
    return u;
}

TauPinTPreconditioner::TauPinTPreconditioner(std::vector<double> lambda_P, std::vector<double> upsilon,
                                             double kappa, std::vector<std::size_t> spatial_extents)
    : lambda_P_(std::move(lambda_P)), upsilon_(std::move(upsilon)), kappa_(kappa) {
    std::size_t J = 1;
    for (auto e : spatial_extents) J *= e;
    if (J != lambda_P_.size() || upsilon_.empty()) {
        throw std::invalid_argument("TauPinTPreconditioner: inconsistent factor sizes");
    }
    extents_.push_back(upsilon_.size());
    extents_.insert(extents_.end(), spatial_extents.begin(), spatial_extents.end());
    const double lo = min_eigenvalue();
    if (!(lo > 0.0)) {
        throw InvariantViolation("TauPinTPreconditioner: nonpositive eigenvalue " + std::to_string(lo));
    }
}

double TauPinTPreconditioner::min_eigenvalue() const {
    return *std::min_element(lambda_P_.begin(), lambda_P_.end()) +
           kappa_ * *std::min_element(upsilon_.begin(), upsilon_.end());
}

double TauPinTPreconditioner::max_eigenvalue() const {
    return *std::max_element(lambda_P_.begin(), lambda_P_.end()) +
           kappa_ * *std::max_element(upsilon_.begin(), upsilon_.end());
}

void TauPinTPreconditioner::apply_diagonal(std::span<const double> v, std::span<double> y,
                                           double power) const {
    if (v.size() != size() || y.size() != size()) {
        throw std::invalid_argument("TauPinTPreconditioner: dimension mismatch");
    }
    std::copy(v.begin(), v.end(), y.begin());
    detail::dst_all_axes(y, extents_);
    const std::size_t N = upsilon_.size();
    const auto J = static_cast<std::ptrdiff_t>(lambda_P_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < J; ++j) {
        double* row = y.data() + static_cast<std::size_t>(j) * N;
        const double lp = lambda_P_[static_cast<std::size_t>(j)];
        if (power == 1.0) {
            for (std::size_t n = 0; n < N; ++n) row[n] *= lp + kappa_ * upsilon_[n];
        } else if (power == -1.0) {
            for (std::size_t n = 0; n < N; ++n) row[n] /= lp + kappa_ * upsilon_[n];
        } else {
            for (std::size_t n = 0; n < N; ++n) row[n] *= std::pow(lp + kappa_ * upsilon_[n], power);
        }
    }
    detail::dst_all_axes(y, extents_);
}

void TauPinTPreconditioner::apply(std::span<const double> v, std::span<double> y) const {
    apply_diagonal(v, y, 1.0);
}

void TauPinTPreconditioner::apply_inv(std::span<const double> v, std::span<double> y) const {
    apply_diagonal(v, y, -1.0);
}

void TauPinTPreconditioner::apply_inv_sqrt(std::span<const double> v, std::span<double> y) const {
    apply_diagonal(v, y, -0.5);
}

DenseMatrix TauPinTPreconditioner::dense(std::size_t cap) const {
    const std::size_t n = size();
    require_dense_size(n, cap);
    DenseMatrix P(n, n);
    std::vector<double> e(n, 0.0), col(n);
    for (std::size_t k = 0; k < n; ++k) {
        e[k] = 1.0;
        apply(e, col);
        for (std::size_t i = 0; i < n; ++i) P(i, k) = col[i];
        e[k] = 0.0;
    }
    return P;
}

TauPinTPreconditioner build_preconditioner(const AllAtOnceOperator& op) {
    const SpatialOperator& G = op.G();
    std::vector<std::vector<double>> q;
    q.reserve(G.dims());
    for (std::size_t i = 0; i < G.dims(); ++i) {
        q.push_back(tau_eigenvalues(symmetric_part(G.block(i)).first_column()).eigs);
    }
    const std::size_t J = G.size();
    std::vector<double> lambda_P(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        std::size_t rest = j;
        for (std::size_t i = 0; i < q.size(); ++i) {
            lambda_P[j] += q[i][rest % q[i].size()];
            rest /= q[i].size();
        }
    }
    auto upsilon = tau_eigenvalues(symmetric_part(op.B()).first_column()).eigs;
    std::vector<std::size_t> ext(G.extents().begin(), G.extents().end());
    return TauPinTPreconditioner(std::move(lambda_P), std::move(upsilon), op.kappa(), std::move(ext));
}

std::vector<double> apply_P_inv(const TauPinTPreconditioner& P, std::span<const double> v) {
    std::vector<double> y(P.size());
    P.apply_inv(v, y);
    return y;
}

std::vector<double> apply_P_inv_sqrt(const TauPinTPreconditioner& P, std::span<const double> v) {
    std::vector<double> y(P.size());
    P.apply_inv_sqrt(v, y);
    return y;
}

}  // namespace taupint
