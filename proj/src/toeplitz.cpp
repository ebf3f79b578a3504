#include "taupint/toeplitz.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "taupint/errors.hpp"

namespace taupint {

namespace {

// Below this bandwidth a direct banded product beats the circulant embedding.
constexpr std::size_t kBandedThreshold = 8;

void check_length(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                    std::to_string(expected) + ", got " + std::to_string(got) +
                                    ")");
    }
}

}  // namespace

void require_dense_size(std::size_t rows, std::size_t cap) {
    if (rows > cap) {
        throw ResourceError("dense materialization of " + std::to_string(rows) +
                            " rows exceeds cap " + std::to_string(cap));
    }
}

Toeplitz1D::Toeplitz1D(std::vector<double> diag_coeffs, EmbeddingPadding padding)
    : coeffs_(std::move(diag_coeffs)) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
        throw std::invalid_argument("Toeplitz1D: need 2m-1 diagonal coefficients, got " +
                                    std::to_string(coeffs_.size()));
    }
    m_ = (coeffs_.size() + 1) / 2;
    for (std::size_t k = 0; k < m_; ++k) {
        if (coeffs_[m_ - 1 + k] != 0.0 || coeffs_[m_ - 1 - k] != 0.0) bandwidth_ = k;
    }
    if (bandwidth_ <= kBandedThreshold) return;

    embed_len_ = padding == EmbeddingPadding::doubled ? 2 * m_ : std::bit_ceil(2 * m_ - 1);
    const auto& dft = detail::RealDft::get(embed_len_);
    detail::AlignedBuffer<double> col(embed_len_);
    std::fill_n(col.data(), embed_len_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) col[k] = coeffs_[m_ - 1 + k];
    for (std::size_t k = 1; k < m_; ++k) col[embed_len_ - k] = coeffs_[m_ - 1 - k];
    detail::AlignedBuffer<std::complex<double>> spec(dft.spectrum_size());
    dft.forward(col.data(), spec.data());
    // Fold the 1/L normalization of the inverse transform into the stored symbol.
    const double scale = 1.0 / static_cast<double>(embed_len_);
    spectrum_.assign(spec.data(), spec.data() + dft.spectrum_size());
    for (auto& z : spectrum_) z *= scale;
}

Toeplitz1D Toeplitz1D::identity(std::size_t m) {
    if (m == 0) throw std::invalid_argument("Toeplitz1D::identity: m must be positive");
    std::vector<double> c(2 * m - 1, 0.0);
    c[m - 1] = 1.0;
    return Toeplitz1D(std::move(c));
}

Toeplitz1D Toeplitz1D::symmetric(std::span<const double> first_col) {
    const std::size_t m = first_col.size();
    if (m == 0) throw std::invalid_argument("Toeplitz1D::symmetric: empty column");
    std::vector<double> c(2 * m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        c[m - 1 + k] = first_col[k];
        c[m - 1 - k] = first_col[k];
    }
    return Toeplitz1D(std::move(c));
}

double Toeplitz1D::coeff(std::ptrdiff_t k) const {
    const auto m = static_cast<std::ptrdiff_t>(m_);
    if (k <= -m || k >= m) return 0.0;
    return coeffs_[static_cast<std::size_t>(k + m - 1)];
}

std::vector<double> Toeplitz1D::first_column() const {
    return {coeffs_.begin() + static_cast<std::ptrdiff_t>(m_ - 1), coeffs_.end()};
}

bool Toeplitz1D::is_symmetric() const noexcept {
    for (std::size_t k = 1; k < m_; ++k) {
        if (coeffs_[m_ - 1 + k] != coeffs_[m_ - 1 - k]) return false;
    }
    return true;
}

void Toeplitz1D::apply(std::span<const double> x, std::span<double> y) const {
    check_length(m_, x.size(), "Toeplitz1D::apply");
    check_length(m_, y.size(), "Toeplitz1D::apply");

    if (spectrum_.empty()) {
        const auto m = static_cast<std::ptrdiff_t>(m_);
        const auto bw = static_cast<std::ptrdiff_t>(bandwidth_);
        const double* t = coeffs_.data() + (m_ - 1);
        for (std::ptrdiff_t l = 0; l < m; ++l) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, l - bw);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(m - 1, l + bw);
            double acc = 0.0;
            for (std::ptrdiff_t h = lo; h <= hi; ++h) acc += t[l - h] * x[static_cast<std::size_t>(h)];
            y[static_cast<std::size_t>(l)] = acc;
        }
        return;
    }

    const auto& dft = detail::RealDft::get(embed_len_);
    auto& s = detail::thread_scratch();
    s.real_a.reserve(embed_len_);
    s.spec.reserve(dft.spectrum_size());
    double* buf = s.real_a.data();
    std::copy(x.begin(), x.end(), buf);
    std::fill(buf + m_, buf + embed_len_, 0.0);
    std::complex<double>* spec = s.spec.data();
    dft.forward(buf, spec);
    for (std::size_t k = 0; k < spectrum_.size(); ++k) spec[k] *= spectrum_[k];
    dft.backward(spec, buf);
    std::copy(buf, buf + m_, y.begin());
}

LowerTriToeplitz::LowerTriToeplitz(std::vector<double> first_col)
    : first_col_(std::move(first_col)),
      full_([this] {
          if (first_col_.empty()) throw std::invalid_argument("LowerTriToeplitz: empty column");
          const std::size_t m = first_col_.size();
          std::vector<double> c(2 * m - 1, 0.0);
          for (std::size_t k = 0; k < m; ++k) c[m - 1 + k] = first_col_[k];
          return Toeplitz1D(std::move(c));
      }()) {}

std::vector<double> toeplitz_matvec(const Toeplitz1D& T, std::span<const double> x) {
    check_length(T.size(), x.size(), "toeplitz_matvec");
    std::vector<double> y(T.size());
    T.apply(x, y);
    return y;
}

std::vector<double> lower_tri_matvec(const LowerTriToeplitz& B, std::span<const double> x) {
    check_length(B.size(), x.size(), "lower_tri_matvec");
    std::vector<double> y(B.size());
    B.apply(x, y);
    return y;
}

namespace {

Toeplitz1D split_part(const Toeplitz1D& T, double sign) {
    const std::size_t m = T.size();
    const auto src = T.diag_coeffs();
    std::vector<double> c(2 * m - 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = 0.5 * (src[i] + sign * src[c.size() - 1 - i]);
    }
    return Toeplitz1D(std::move(c));
}

}  // namespace

Toeplitz1D symmetric_part(const Toeplitz1D& T) { return split_part(T, 1.0); }
Toeplitz1D skew_part(const Toeplitz1D& T) { return split_part(T, -1.0); }
Toeplitz1D symmetric_part(const LowerTriToeplitz& B) { return split_part(B.as_toeplitz(), 1.0); }
Toeplitz1D skew_part(const LowerTriToeplitz& B) { return split_part(B.as_toeplitz(), -1.0); }

DenseMatrix materialize(const Toeplitz1D& T, std::size_t cap) {
    const std::size_t m = T.size();
    require_dense_size(m, cap);
    DenseMatrix D(m, m);
    const auto c = T.diag_coeffs();
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t h = 0; h < m; ++h) D(l, h) = c[l + m - 1 - h];
    }
    return D;
}

DenseMatrix materialize(const LowerTriToeplitz& B, std::size_t cap) {
    return materialize(B.as_toeplitz(), cap);
}

}  // namespace taupint
