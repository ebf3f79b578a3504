#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "taupint/allatonce.hpp"

namespace taupint {

/// y = Op x; x and y never alias.
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

enum class ResidualNorm {
    preconditioned,  ///< ||M^{-1}(b - A x)||, what MATLAB's gmres tests
    true_residual,   ///< ||b - A x||
};

struct GmresConfig {
    std::size_t restart = 20;
    /// Maximum number of restart cycles (MATLAB semantics); the inner-iteration
    /// cap is restart * maxit.
    std::size_t maxit = 1000;
    double rel_tol = 1e-8;
    ResidualNorm residual_norm_mode = ResidualNorm::preconditioned;
    /// Also record the residual in the other norm at every inner step.
    bool record_history = false;
    /// Wall-clock budget in seconds; <= 0 disables it.
    double time_budget_s = 0.0;

    void validate() const;
};

struct SolveReport {
    std::size_t iterations = 0;  ///< total inner iterations over all cycles
    std::size_t cycles = 0;
    bool converged = false;
    bool breakdown = false;
    bool timed_out = false;
    double relative_residual = 0.0;  ///< final, in the configured norm
    /// Least-squares residual of the minimized norm, one entry per inner step
    /// plus the initial residual at index 0.
    std::vector<double> residual_history;
    /// When record_history: explicit ||M^{-1}(b - A x_k)|| and ||b - A x_k||.
    std::vector<double> preconditioned_history;
    std::vector<double> true_history;
    double wall_seconds = 0.0;
    std::vector<double> solution;
};

/// Restarted left-preconditioned GMRES: modified Gram-Schmidt Arnoldi plus
/// Givens rotations.  An empty prec means no preconditioning.
SolveReport gmres(const LinearMap& apply_op, const LinearMap& apply_prec, std::span<const double> b,
                  std::span<const double> x0, const GmresConfig& cfg);

/// GMRES on P^{-1} A u = P^{-1} f from the zero vector.
SolveReport solve_one_sided(const AllAtOnceOperator& A, const TauPinTPreconditioner& P,
                            std::span<const double> f, const GmresConfig& cfg);

/// Plain GMRES on A u = f from the zero vector.
SolveReport solve_unpreconditioned(const AllAtOnceOperator& A, std::span<const double> f,
                                   const GmresConfig& cfg);

/// GMRES on P^{-1/2} A P^{-1/2} w = P^{-1/2} f from zero; returns u = P^{-1/2} w.
/// The histories refer to the transformed system.
SolveReport solve_two_sided(const AllAtOnceOperator& A, const TauPinTPreconditioner& P,
                            std::span<const double> f, const GmresConfig& cfg);

}  // namespace taupint
