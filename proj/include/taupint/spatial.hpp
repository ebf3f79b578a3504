#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "taupint/toeplitz.hpp"

namespace taupint {

enum class SpatialKind { laplacian, riesz, riemann_liouville };

const char* to_string(SpatialKind kind);

/// Discretization data for one spatial direction.
struct AxisSpec {
    std::size_t m = 1;     ///< interior points
    double lower = 0.0;
    double upper = 1.0;
    double beta = 2.0;     ///< fractional order, (1,2) for the fractional kinds
    double c = 1.0;        ///< Riesz coefficient
    double k_plus = 0.0;   ///< left Riemann-Liouville coefficient
    double k_minus = 0.0;  ///< right Riemann-Liouville coefficient

    [[nodiscard]] double h() const { return (upper - lower) / static_cast<double>(m + 1); }
    /// Interior node j (0-based): lower + (j+1) h.
    [[nodiscard]] double node(std::size_t j) const { return lower + static_cast<double>(j + 1) * h(); }
};

struct SpatialSpec {
    SpatialKind kind = SpatialKind::laplacian;
    std::vector<AxisSpec> axes;

    [[nodiscard]] std::size_t dims() const noexcept { return axes.size(); }
    [[nodiscard]] std::size_t total_points() const;
    /// Throws std::invalid_argument on any violated parameter constraint.
    void validate() const;
};

/// G_J = sum_i I (x) ... (x) T_i (x) ... (x) I acting on vectors with x_1 fastest.
class SpatialOperator {
public:
    explicit SpatialOperator(std::vector<Toeplitz1D> blocks);

    [[nodiscard]] std::size_t dims() const noexcept { return blocks_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::span<const std::size_t> extents() const noexcept { return extents_; }
    [[nodiscard]] const Toeplitz1D& block(std::size_t i) const { return blocks_.at(i); }
    [[nodiscard]] std::span<const Toeplitz1D> blocks() const noexcept { return blocks_; }
    [[nodiscard]] bool is_symmetric() const noexcept;

    void apply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] DenseMatrix dense(std::size_t cap = kDefaultDenseCap) const;

private:
    std::vector<Toeplitz1D> blocks_;
    std::vector<std::size_t> extents_;
    std::size_t size_ = 1;
};

/// -d^2/dx^2 by central differences: t_0 = 2/h^2, t_{+-1} = -1/h^2.
Toeplitz1D laplacian_coeffs(double h, std::size_t m);

/// Fractional centered difference weights g_0..g_{count-1} for order beta.
/// No range check, so the beta = 2 limit can be inspected.
std::vector<double> fractional_centered_weights(double beta, std::size_t count);

/// -c d^beta/d|x|^beta by the fractional centered difference, beta in (1,2).
Toeplitz1D riesz_centered_coeffs(double beta, double h, std::size_t m, double c = 1.0);

/// Grunwald weights (-1)^k binom(beta, k), k = 0..count-1.
std::vector<double> grunwald_weights(double beta, std::size_t count);

/// Second-order WSGD weights with shifts (1, 0): w_0 = beta/2 g_0,
/// w_k = beta/2 g_k + (2-beta)/2 g_{k-1}.
std::vector<double> wsgd_weights(double beta, std::size_t count);

/// -(k_+ D_+^beta + k_- D_-^beta) by WSGD: -h^{-beta} (k_+ W + k_- W^T).
Toeplitz1D wsgd_coeffs(double beta, double h, std::size_t m, double k_plus, double k_minus);

/// Throws ResourceError when the grid exceeds max_points unknowns.
SpatialOperator assemble_G(const SpatialSpec& spec, std::size_t max_points = std::size_t{1} << 26);

std::vector<double> G_matvec(const SpatialOperator& G, std::span<const double> x);

/// w(theta) = sum_i sum_{|k|<m_i} t^{(i)}_k e^{i k theta_i}, the symbol truncated
/// to the coefficients the assembled blocks actually carry.
std::complex<double> spatial_symbol_eval(const SpatialSpec& spec, std::span<const double> theta);

/// Symbol of one assembled axis block.
std::complex<double> block_symbol_eval(const Toeplitz1D& T, double theta);

}  // namespace taupint
