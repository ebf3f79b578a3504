#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "taupint/l1.hpp"
#include "taupint/spatial.hpp"
#include "taupint/toeplitz.hpp"

namespace taupint {

/// Scalar field over space, x has one coordinate per spatial dimension.
using SpaceFunction = std::function<double(std::span<const double> x)>;
using SpaceTimeFunction = std::function<double(std::span<const double> x, double t)>;

/// Caputo time-fractional problem D_t^alpha u = L u + f on a box, u = psi at t = 0,
/// homogeneous Dirichlet data in space.
struct ProblemSpec {
    SpatialSpec spatial;
    double alpha = 0.5;
    double T_final = 1.0;
    std::size_t N = 1;
    SpaceTimeFunction source;
    SpaceFunction initial;
    SpaceTimeFunction exact;  ///< optional

    /// Throws std::invalid_argument on inconsistent data.
    void validate() const;
};

/// Coordinates of spatial grid point j (x_1 index fastest).
void grid_point(const SpatialSpec& spec, std::size_t j, std::span<double> x);

/// A = G (x) I_N + I_J (x) kappa B acting on u = (u_1; ...; u_J), u_j in R^N.
///
/// In memory this is a tensor with extents (N, m_1, ..., m_d), time contiguous.
class AllAtOnceOperator {
public:
    AllAtOnceOperator(SpatialOperator G, const L1Coefficients& coeffs);

    [[nodiscard]] const SpatialOperator& G() const noexcept { return G_; }
    [[nodiscard]] const LowerTriToeplitz& B() const noexcept { return B_; }
    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] std::size_t N() const noexcept { return N_; }
    [[nodiscard]] std::size_t J() const noexcept { return G_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return N_ * G_.size(); }
    [[nodiscard]] std::span<const std::size_t> extents() const noexcept { return extents_; }

    void apply(std::span<const double> u, std::span<double> y) const;
    [[nodiscard]] DenseMatrix dense(std::size_t cap = kDefaultDenseCap) const;

private:
    SpatialOperator G_;
    LowerTriToeplitz B_;
    double kappa_;
    std::size_t N_;
    std::vector<std::size_t> extents_;
};

std::vector<double> apply_A(const AllAtOnceOperator& op, std::span<const double> u);

/// Entry (j, n) is f(x_j, n mu) + kappa a_{n-1} psi(x_j).
std::vector<double> assemble_rhs(const ProblemSpec& prob, const L1Coefficients& coeffs);

/// u*(x_j, n mu) for n = 1..N in the solver ordering.  Requires prob.exact.
std::vector<double> sample_exact(const ProblemSpec& prob);

/// P = S diag(Lambda) S with Lambda[j, n] = lambda_P[j] + kappa upsilon[n] and
/// S the orthonormal DST-I applied along every axis.
class TauPinTPreconditioner {
public:
    /// Throws InvariantViolation if some Lambda entry is not positive.
    TauPinTPreconditioner(std::vector<double> lambda_P, std::vector<double> upsilon, double kappa,
                          std::vector<std::size_t> spatial_extents);

    [[nodiscard]] std::span<const double> lambda_P() const noexcept { return lambda_P_; }
    [[nodiscard]] std::span<const double> upsilon() const noexcept { return upsilon_; }
    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] std::size_t size() const noexcept { return lambda_P_.size() * upsilon_.size(); }
    [[nodiscard]] double eigenvalue(std::size_t j, std::size_t n) const {
        return lambda_P_[j] + kappa_ * upsilon_[n];
    }
    [[nodiscard]] double min_eigenvalue() const;
    [[nodiscard]] double max_eigenvalue() const;

    void apply(std::span<const double> v, std::span<double> y) const;
    void apply_inv(std::span<const double> v, std::span<double> y) const;
    void apply_inv_sqrt(std::span<const double> v, std::span<double> y) const;

    [[nodiscard]] DenseMatrix dense(std::size_t cap = kDefaultDenseCap) const;

private:
    void apply_diagonal(std::span<const double> v, std::span<double> y, double power) const;

    std::vector<double> lambda_P_;
    std::vector<double> upsilon_;
    double kappa_;
    std::vector<std::size_t> extents_;  // (N, m_1, ..., m_d)
};

/// Spatial factor: Kronecker sum of tau(H(T_i)); for the Laplacian this is G itself.
/// Temporal factor: tau(H(B)).
TauPinTPreconditioner build_preconditioner(const AllAtOnceOperator& op);

std::vector<double> apply_P_inv(const TauPinTPreconditioner& P, std::span<const double> v);
std::vector<double> apply_P_inv_sqrt(const TauPinTPreconditioner& P, std::span<const double> v);

}  // namespace taupint
