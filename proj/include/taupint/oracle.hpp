#pragma once

// Dense small-scale certification of the spectral bounds behind the solver.
// Everything here materializes matrices and is meant for sizes up to a few
// thousand unknowns.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "taupint/allatonce.hpp"
#include "taupint/gmres.hpp"
#include "taupint/spatial.hpp"
#include "taupint/toeplitz.hpp"

namespace taupint {

/// Absolute slack applied to every strict inequality.
inline constexpr double kOracleSlack = 1e-8;
/// Default number of sample points per angular variable.
inline constexpr std::size_t kSymbolGrid = 4096;

struct CheckReport {
    std::string name;
    bool passed = false;
    std::map<std::string, double> values;  ///< configuration and measured constants
    std::string message;
};

struct SpectralBounds {
    double epsilon = 0.0;          ///< ideal-preconditioner skew radius
    double eta = 0.0;              ///< max(mu_beta, tan(alpha pi / 2))
    double mu_beta = 0.0;          ///< sup |Im w| / Re w over the spatial symbol grid
    double mu_beta_matrix = 0.0;   ///< rho(H(G)^{-1/2} S(G) H(G)^{-1/2})
    double a_check = 0.0;          ///< lambda_min(Ptilde^{-1} H(G))
    double a_hat = 0.0;            ///< lambda_max(Ptilde^{-1} H(G))
    double b_check = 0.0;
    double b_hat = 0.0;
    double varsigma = 0.0;
    double omega_ideal = 0.0;
    double omega_practical = 0.0;
    double c_check = 0.0;          ///< lambda_min(Ptilde)
};

/// min{a, 1/2} and max{a_hat, 3/2}.
double compose_b_check(double a_check);
double compose_b_hat(double a_hat);
/// sqrt((2 + 4 s^2) / (3 + 4 s^2)).
double omega_practical(double varsigma);
/// e / sqrt(1 + e^2).
double omega_ideal(double epsilon);

/// Eigenvalues of T_g^{-1} T_f lie in [min f/g, max f/g] sampled on a grid.
/// Both matrices must be symmetric; throws std::invalid_argument unless T_g is SPD.
CheckReport check_localization(const Toeplitz1D& Tf, const Toeplitz1D& Tg, std::size_t grid = kSymbolGrid);

/// DST-I involution, dense tau(T) eigenvalues against the cosine formula, and
/// the transform route against the cosine formula, for a random symmetric T of
/// order m drawn from a fixed seed.
CheckReport check_tau_algebra(std::size_t m, unsigned seed = 7);

/// Eigenvalues of tau(H(B))^{-1} H(B) lie strictly inside (1/2, 3/2).
CheckReport check_temporal_equivalence(double alpha, std::size_t N);

/// tau(H(B)) has positive diagonal, nonpositive off-diagonal and is strictly
/// row diagonally dominant.
CheckReport check_diag_dominance(double alpha, std::size_t N);

/// Samples the temporal symbol quotient against tan(alpha pi / 2) and measures
/// mu_beta from the assembled spatial blocks.  Fills eta and mu_beta.
CheckReport check_symbol_quotients(const SpatialSpec& spatial, double alpha, SpectralBounds& bounds,
                                   std::size_t grid = kSymbolGrid, std::size_t K = 100000);

/// sup over a theta grid (0 excluded) of |Im w_i| / Re w_i, maximized over the
/// assembled blocks; 0 for symmetric blocks.  Returns +inf if some Re w_i <= 0.
double measure_mu_beta(const SpatialOperator& G, std::size_t grid = kSymbolGrid);

/// Dense Ptilde (x) I + kappa I (x) tau(H(B)) assembled from dense tau blocks,
/// independent of the transform-based preconditioner.
DenseMatrix dense_preconditioner(const AllAtOnceOperator& op, std::size_t cap = kDefaultDenseCap);
/// Dense Kronecker sum of tau(H(T_i)).
DenseMatrix dense_spatial_preconditioner(const SpatialOperator& G, std::size_t cap = kDefaultDenseCap);

/// Spectral equivalence of P and H(A), the skew bound and the two-sided GMRES
/// contraction rate.  Measures mu_beta first when it is still zero and G is
/// nonsymmetric.
CheckReport check_practical_bounds(const AllAtOnceOperator& op, std::span<const double> f, double alpha,
                                   SpectralBounds& bounds, const GmresConfig& cfg = {});

/// Two-sided GMRES with dense H(A)^{-1/2} contracts at rate eps / sqrt(1 + eps^2).
CheckReport check_ideal_contraction(const DenseMatrix& A, std::span<const double> f, SpectralBounds& bounds,
                                    const GmresConfig& cfg = {});

/// One-sided and two-sided residuals at equal step counts obey
/// ||r_j|| <= ||r_hat_j|| / sqrt(lambda_min(P)).  Runs without restarts.
CheckReport check_residual_relation(const AllAtOnceOperator& op, const TauPinTPreconditioner& P,
                                    std::span<const double> f, std::size_t steps = 60);

/// min xi_i / zeta_i <= sum xi / sum zeta <= max xi_i / zeta_i for xi >= 0, zeta > 0.
CheckReport check_weighted_mean_inequality(std::span<const double> xi, std::span<const double> zeta);

/// Symmetric inverse square root of an SPD matrix via its eigendecomposition.
DenseMatrix spd_inv_sqrt(const DenseMatrix& M);
/// Spectral radius of a skew-symmetric matrix (its 2-norm).
double skew_radius(const DenseMatrix& K);

}  // namespace taupint
