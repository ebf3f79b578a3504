#include "taupint/tau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"
#include "taupint/errors.hpp"

namespace taupint {

void dst1_inplace(std::span<double> v) {
    const std::size_t m = v.size();
    if (m == 0) throw std::invalid_argument("dst1: empty vector");

    // Odd extension (0, v_1..v_m, 0, -v_m..-v_1) of length 2(m+1); its DFT is
    // -2i * sum_j v_j sin(pi j k / (m+1)).
    const std::size_t len = 2 * (m + 1);
    const auto& dft = detail::RealDft::get(len);
    auto& s = detail::thread_scratch();
    s.real_b.reserve(len);
    s.spec.reserve(dft.spectrum_size());
    double* ext = s.real_b.data();
    ext[0] = 0.0;
    ext[m + 1] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        ext[j + 1] = v[j];
        ext[len - 1 - j] = -v[j];
    }
    std::complex<double>* spec = s.spec.data();
    dft.forward(ext, spec);
    const double scale = -0.5 * std::sqrt(2.0 / static_cast<double>(m + 1));
    for (std::size_t k = 0; k < m; ++k) v[k] = scale * spec[k + 1].imag();
}

std::vector<double> dst1(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    dst1_inplace(out);
    return out;
}

namespace {

// Hankel correction H(i, j) depends on s = i + j (0-based): first column
// (t_3, ..., t_m, 0, 0) and last column (0, 0, t_m, ..., t_3) in 1-based terms.
double hankel_entry(std::span<const double> t, std::size_t s) {
    const std::size_t m = t.size();
    if (s + 3 <= m) return t[s + 2];
    if (s >= m + 1) return t[2 * m - s];
    return 0.0;
}

}  // namespace

DenseMatrix tau_dense(std::span<const double> t, std::size_t cap) {
    const std::size_t m = t.size();
    if (m == 0) throw std::invalid_argument("tau_dense: empty column");
    require_dense_size(m, cap);
    DenseMatrix D(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            D(i, j) = t[d] - hankel_entry(t, i + j);
        }
    }
    return D;
}

TauOperator tau_eigenvalues(std::span<const double> t) {
    const std::size_t m = t.size();
    if (m == 0) throw std::invalid_argument("tau_eigenvalues: empty column");
    TauOperator out;
    out.eigs.resize(m);
    const double w = std::numbers::pi / static_cast<double>(m + 1);
    for (std::size_t i = 1; i <= m; ++i) {
        double q = t[0];
        for (std::size_t j = 2; j <= m; ++j) {
            q += 2.0 * t[j - 1] * std::cos(w * static_cast<double>(i * (j - 1)));
        }
        out.eigs[i - 1] = q;
    }
    return out;
}

TauOperator tau_eigs_fast(std::span<const double> t) {
    const std::size_t m = t.size();
    if (m == 0) throw std::invalid_argument("tau_eigs_fast: empty column");
    std::vector<double> col(m);
    for (std::size_t k = 0; k < m; ++k) col[k] = t[k] - hankel_entry(t, k);
    dst1_inplace(col);
    const double w = std::numbers::pi / static_cast<double>(m + 1);
    const double norm = std::sqrt(2.0 / static_cast<double>(m + 1));
    TauOperator out;
    out.eigs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.eigs[k] = col[k] / (norm * std::sin(w * static_cast<double>(k + 1)));
    }
    return out;
}

std::vector<double> tau_apply(const TauOperator& tau, std::span<const double> v) {
    if (v.size() != tau.size()) throw std::invalid_argument("tau_apply: dimension mismatch");
    auto y = dst1(v);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= tau.eigs[k];
    dst1_inplace(y);
    return y;
}

std::vector<double> tau_solve(const TauOperator& tau, std::span<const double> v) {
    if (v.size() != tau.size()) throw std::invalid_argument("tau_solve: dimension mismatch");
    double qmax = 0.0;
    for (double q : tau.eigs) qmax = std::max(qmax, std::abs(q));
    for (double q : tau.eigs) {
        if (!(std::abs(q) >= 1e-14 * qmax) || qmax == 0.0) {
            throw SingularOperatorError("tau_solve: eigenvalue below 1e-14 * max|q|");
        }
    }
    auto y = dst1(v);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] /= tau.eigs[k];
    dst1_inplace(y);
    return y;
}

}  // namespace taupint
