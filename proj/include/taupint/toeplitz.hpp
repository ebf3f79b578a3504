#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace taupint {

/// Dense row-major-agnostic matrix used only on oracle paths.
using DenseMatrix = Eigen::MatrixXd;

/// Default cap on the number of rows any dense materialization may produce.
inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Circulant embedding length used by the FFT matvec.
enum class EmbeddingPadding {
    doubled,       ///< length 2m
    power_of_two,  ///< smallest power of two >= 2m-1
};

/// One-level Toeplitz matrix of order m stored by its 2m-1 diagonals.
///
/// Entry (l, h) equals diag_coeffs[(l - h) + (m - 1)], i.e. coeff(k) is the
/// value on the diagonal row - col = k.  The object is immutable; the FFT of
/// the circulant embedding is computed once at construction so that apply()
/// is a pure function safe to call from several threads.
class Toeplitz1D {
public:
    explicit Toeplitz1D(std::vector<double> diag_coeffs,
                        EmbeddingPadding padding = EmbeddingPadding::doubled);

    static Toeplitz1D identity(std::size_t m);
    /// Symmetric Toeplitz matrix with the given first column (t_0, ..., t_{m-1}).
    static Toeplitz1D symmetric(std::span<const double> first_col);

    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    [[nodiscard]] double coeff(std::ptrdiff_t k) const;
    [[nodiscard]] std::span<const double> diag_coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::vector<double> first_column() const;
    [[nodiscard]] bool is_symmetric() const noexcept;
    /// Largest |k| with coeff(k) != 0.
    [[nodiscard]] std::size_t bandwidth() const noexcept { return bandwidth_; }

    /// y = T x.  x and y must both have length size() and must not alias.
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t m_;
    std::vector<double> coeffs_;
    std::size_t bandwidth_ = 0;
    std::size_t embed_len_ = 0;
    std::vector<std::complex<double>> spectrum_;  // empty when the banded path is used
};

/// Lower-triangular Toeplitz matrix given by its first column.
class LowerTriToeplitz {
public:
    explicit LowerTriToeplitz(std::vector<double> first_col);

    [[nodiscard]] std::size_t size() const noexcept { return first_col_.size(); }
    [[nodiscard]] std::span<const double> first_column() const noexcept { return first_col_; }
    [[nodiscard]] const Toeplitz1D& as_toeplitz() const noexcept { return full_; }

    void apply(std::span<const double> x, std::span<double> y) const { full_.apply(x, y); }

private:
    std::vector<double> first_col_;
    Toeplitz1D full_;
};

std::vector<double> toeplitz_matvec(const Toeplitz1D& T, std::span<const double> x);
std::vector<double> lower_tri_matvec(const LowerTriToeplitz& B, std::span<const double> x);

/// (Z + Z^T) / 2 and (Z - Z^T) / 2; both stay Toeplitz with coefficients (t_k +- t_{-k}) / 2.
Toeplitz1D symmetric_part(const Toeplitz1D& T);
Toeplitz1D skew_part(const Toeplitz1D& T);
Toeplitz1D symmetric_part(const LowerTriToeplitz& B);
Toeplitz1D skew_part(const LowerTriToeplitz& B);

DenseMatrix materialize(const Toeplitz1D& T, std::size_t cap = kDefaultDenseCap);
DenseMatrix materialize(const LowerTriToeplitz& B, std::size_t cap = kDefaultDenseCap);

/// Throws ResourceError when rows exceeds cap.
void require_dense_size(std::size_t rows, std::size_t cap);

}  // namespace taupint
