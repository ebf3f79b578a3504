#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "taupint/toeplitz.hpp"

namespace taupint {

/// Orthonormal DST-I: (S v)_k = sqrt(2/(m+1)) * sum_j v_j sin(pi j k / (m+1)), j,k = 1..m.
/// S is symmetric and involutory, so dst1(dst1(v)) == v.
std::vector<double> dst1(std::span<const double> v);

/// In-place variant used by the pencil kernels.
void dst1_inplace(std::span<double> v);

/// Matrix in the sine algebra, stored by its eigenvalues only: tau = S diag(eigs) S.
///
/// Index convention: the 1-based sequences t_1..t_m and q_1..q_m
/// live in 0-based storage here, so eigs[i] belongs to the sine vector
/// sin(pi (i+1) j / (m+1)).  Every other module goes through this API.
struct TauOperator {
    std::vector<double> eigs;

    [[nodiscard]] std::size_t size() const noexcept { return eigs.size(); }
};

/// Dense tau(T) = T - H for the symmetric Toeplitz T with first column t.
DenseMatrix tau_dense(std::span<const double> t, std::size_t cap = kDefaultDenseCap);

/// q_i = t_1 + 2 sum_{j>=2} t_j cos(pi i (j-1) / (m+1)), evaluated directly in O(m^2).
TauOperator tau_eigenvalues(std::span<const double> t);

/// Same eigenvalues from q = diag(S e_1)^{-1} S tau(T) e_1 in O(m log m).
TauOperator tau_eigs_fast(std::span<const double> t);

std::vector<double> tau_apply(const TauOperator& tau, std::span<const double> v);

/// Throws SingularOperatorError if some |q| < 1e-14 max|q|.
std::vector<double> tau_solve(const TauOperator& tau, std::span<const double> v);

}  // namespace taupint
