#include "taupint/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pencil.hpp"
#include "taupint/errors.hpp"

namespace taupint {

const char* to_string(SpatialKind kind) {
    switch (kind) {
        case SpatialKind::laplacian: return "laplacian";
        case SpatialKind::riesz: return "riesz";
        case SpatialKind::riemann_liouville: return "riemann_liouville";
    }
    return "unknown";
}

std::size_t SpatialSpec::total_points() const {
    std::size_t J = 1;
    for (const auto& a : axes) J *= a.m;
    return J;
}

void SpatialSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("SpatialSpec: need at least one axis");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& a = axes[i];
        const std::string where = "SpatialSpec axis " + std::to_string(i) + ": ";
        if (a.m == 0) throw std::invalid_argument(where + "m must be positive");
        if (!(a.upper > a.lower)) throw std::invalid_argument(where + "empty domain");
        if (kind == SpatialKind::laplacian) continue;
        if (!(a.beta > 1.0 && a.beta < 2.0)) {
            throw std::invalid_argument(where + "beta must lie in (1,2), got " + std::to_string(a.beta));
        }
        if (kind == SpatialKind::riesz && !(a.c > 0.0)) {
            throw std::invalid_argument(where + "Riesz coefficient must be positive");
        }
        if (kind == SpatialKind::riemann_liouville &&
            (a.k_plus < 0.0 || a.k_minus < 0.0 || (a.k_plus == 0.0 && a.k_minus == 0.0))) {
            throw std::invalid_argument(where + "need k_plus, k_minus >= 0, not both zero");
        }
    }
}

SpatialOperator::SpatialOperator(std::vector<Toeplitz1D> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("SpatialOperator: no blocks");
    for (const auto& b : blocks_) {
        extents_.push_back(b.size());
        size_ *= b.size();
    }
}

bool SpatialOperator::is_symmetric() const noexcept {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.is_symmetric(); });
}

void SpatialOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != size_ || y.size() != size_) {
        throw std::invalid_argument("SpatialOperator::apply: dimension mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        detail::accumulate_axis_toeplitz(blocks_[i], x, y, extents_, i, 1.0);
    }
}

DenseMatrix SpatialOperator::dense(std::size_t cap) const {
    require_dense_size(size_, cap);
    DenseMatrix D = DenseMatrix::Zero(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
    std::vector<std::size_t> idx(extents_.size());
    for (std::size_t p = 0; p < size_; ++p) {
        std::size_t rest = p;
        for (std::size_t i = 0; i < extents_.size(); ++i) {
            idx[i] = rest % extents_[i];
            rest /= extents_[i];
        }
        std::size_t stride = 1;
        for (std::size_t i = 0; i < extents_.size(); ++i) {
            const std::size_t base = p - idx[i] * stride;
            for (std::size_t q = 0; q < extents_[i]; ++q) {
                const auto k = static_cast<std::ptrdiff_t>(idx[i]) - static_cast<std::ptrdiff_t>(q);
                D(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(base + q * stride)) +=
                    blocks_[i].coeff(k);
            }
            stride *= extents_[i];
        }
    }
    return D;
}

Toeplitz1D laplacian_coeffs(double h, std::size_t m) {
    if (m == 0 || !(h > 0.0)) throw std::invalid_argument("laplacian_coeffs: need m >= 1, h > 0");
    std::vector<double> c(2 * m - 1, 0.0);
    const double ih2 = 1.0 / (h * h);
    c[m - 1] = 2.0 * ih2;
    if (m > 1) {
        c[m - 2] = -ih2;
        c[m] = -ih2;
    }
    return Toeplitz1D(std::move(c));
}

std::vector<double> fractional_centered_weights(double beta, std::size_t count) {
    std::vector<double> g(count);
    if (count == 0) return g;
    const double half = 0.5 * beta;
    g[0] = std::tgamma(beta + 1.0) / (std::tgamma(half + 1.0) * std::tgamma(half + 1.0));
    for (std::size_t k = 0; k + 1 < count; ++k) {
        const auto kd = static_cast<double>(k);
        g[k + 1] = g[k] * (kd - half) / (kd + 1.0 + half);
    }
    return g;
}

Toeplitz1D riesz_centered_coeffs(double beta, double h, std::size_t m, double c) {
    if (!(beta > 1.0 && beta < 2.0)) {
        throw std::invalid_argument("riesz_centered_coeffs: beta must lie in (1,2)");
    }
    if (m == 0 || !(h > 0.0)) throw std::invalid_argument("riesz_centered_coeffs: need m >= 1, h > 0");
    const auto g = fractional_centered_weights(beta, m);
    const double scale = c * std::pow(h, -beta);
    std::vector<double> t(2 * m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        t[m - 1 + k] = scale * g[k];
        t[m - 1 - k] = scale * g[k];
    }
    return Toeplitz1D(std::move(t));
}

std::vector<double> grunwald_weights(double beta, std::size_t count) {
    std::vector<double> g(count);
    if (count == 0) return g;
    g[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        g[k] = g[k - 1] * (1.0 - (beta + 1.0) / static_cast<double>(k));
    }
    return g;
}

std::vector<double> wsgd_weights(double beta, std::size_t count) {
    const auto g = grunwald_weights(beta, count);
    std::vector<double> w(count);
    if (count == 0) return w;
    w[0] = 0.5 * beta * g[0];
    for (std::size_t k = 1; k < count; ++k) w[k] = 0.5 * beta * g[k] + 0.5 * (2.0 - beta) * g[k - 1];
    return w;
}

Toeplitz1D wsgd_coeffs(double beta, double h, std::size_t m, double k_plus, double k_minus) {
    if (!(beta > 1.0 && beta < 2.0)) throw std::invalid_argument("wsgd_coeffs: beta must lie in (1,2)");
    if (m == 0 || !(h > 0.0)) throw std::invalid_argument("wsgd_coeffs: need m >= 1, h > 0");
    if (k_plus < 0.0 || k_minus < 0.0 || (k_plus == 0.0 && k_minus == 0.0)) {
        throw std::invalid_argument("wsgd_coeffs: need k_plus, k_minus >= 0, not both zero");
    }
    // W carries w_{d+1} on diagonal row - col = d for d >= -1.
    const auto w = wsgd_weights(beta, m + 1);
    auto W = [&](std::ptrdiff_t d) -> double {
        if (d < -1) return 0.0;
        return w[static_cast<std::size_t>(d + 1)];
    };
    const double scale = -std::pow(h, -beta);
    const auto mm = static_cast<std::ptrdiff_t>(m);
    std::vector<double> t(2 * m - 1);
    for (std::ptrdiff_t d = -(mm - 1); d <= mm - 1; ++d) {
        t[static_cast<std::size_t>(d + mm - 1)] = scale * (k_plus * W(d) + k_minus * W(-d));
    }
    return Toeplitz1D(std::move(t));
}

SpatialOperator assemble_G(const SpatialSpec& spec, std::size_t max_points) {
    spec.validate();
    std::size_t J = 1;
    for (const auto& a : spec.axes) {
        if (a.m > max_points / J) {
            throw ResourceError("assemble_G: grid exceeds " + std::to_string(max_points) + " points");
        }
        J *= a.m;
    }
    std::vector<Toeplitz1D> blocks;
    blocks.reserve(spec.dims());
    for (const auto& a : spec.axes) {
        switch (spec.kind) {
            case SpatialKind::laplacian: blocks.push_back(laplacian_coeffs(a.h(), a.m)); break;
            case SpatialKind::riesz: blocks.push_back(riesz_centered_coeffs(a.beta, a.h(), a.m, a.c)); break;
            case SpatialKind::riemann_liouville:
                blocks.push_back(wsgd_coeffs(a.beta, a.h(), a.m, a.k_plus, a.k_minus));
                break;
        }
    }
    return SpatialOperator(std::move(blocks));
}

std::vector<double> G_matvec(const SpatialOperator& G, std::span<const double> x) {
    std::vector<double> y(G.size());
    G.apply(x, y);
    return y;
}

std::complex<double> block_symbol_eval(const Toeplitz1D& T, double theta) {
    const auto m = static_cast<std::ptrdiff_t>(T.size());
    std::complex<double> acc = 0.0;
    for (std::ptrdiff_t k = -(m - 1); k <= m - 1; ++k) {
        const double t = T.coeff(k);
        if (t == 0.0) continue;
        acc += t * std::polar(1.0, static_cast<double>(k) * theta);
    }
    return acc;
}

std::complex<double> spatial_symbol_eval(const SpatialSpec& spec, std::span<const double> theta) {
    if (theta.size() != spec.dims()) throw std::invalid_argument("spatial_symbol_eval: theta has wrong dimension");
    const SpatialOperator G = assemble_G(spec);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < spec.dims(); ++i) acc += block_symbol_eval(G.block(i), theta[i]);
    return acc;
}

}  // namespace taupint
