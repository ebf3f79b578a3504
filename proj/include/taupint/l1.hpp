#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "taupint/toeplitz.hpp"

namespace taupint {

/// L1 weights for the Caputo derivative of order alpha on a uniform mesh.
struct L1Coefficients {
    double alpha = 0.5;
    std::size_t N = 1;
    double mu = 1.0;     ///< time step T/N
    double kappa = 1.0;  ///< 1 / (Gamma(2 - alpha) mu^alpha)
    std::vector<double> a;  ///< a_j = (j+1)^{1-alpha} - j^{1-alpha}, j = 0..N-1
    std::vector<double> l;  ///< l_0 = kappa a_0, l_k = kappa (a_k - a_{k-1})

    /// Weight multiplying the initial value psi at time level n (1-based): -kappa a_{n-1}.
    [[nodiscard]] double initial_weight(std::size_t n) const { return -kappa * a[n - 1]; }
};

/// Throws std::invalid_argument unless 0 < alpha < 1, N >= 1 and T_final > 0.
L1Coefficients l1_coefficients(double alpha, std::size_t N, double T_final);

/// Temporal matrix with first column (a_0, a_1 - a_0, ..., a_{N-1} - a_{N-2});
/// the all-at-once operator uses kappa * B.
LowerTriToeplitz build_B(const L1Coefficients& coeffs);

/// a_j evaluated without cancellation for large j.
double l1_weight(double alpha, std::size_t j);

struct SymbolValue {
    std::complex<double> value;
    /// sum_{j>K} |a_j - a_{j-1}| = a_K; valid for every phi.
    double tail_bound_monotone = 0.0;
    /// |b_{K+1}| / |sin(phi/2)| from Abel summation of the monotone tail; +inf at phi = 0 mod 2pi.
    double tail_bound_oscillatory = 0.0;

    [[nodiscard]] double tail_bound() const;
};

/// Partial sum a_0 + sum_{j=1}^{K} (a_j - a_{j-1}) e^{i j phi} of the temporal symbol.
SymbolValue g_alpha_eval(double phi, double alpha, std::size_t K = 100000);

}  // namespace taupint
