#include "taupint/l1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace taupint {

L1Coefficients l1_coefficients(double alpha, std::size_t N, double T_final) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("l1_coefficients: alpha must lie in (0,1), got " +
                                    std::to_string(alpha));
    }
    if (N == 0) throw std::invalid_argument("l1_coefficients: N must be positive");
    if (!(T_final > 0.0)) throw std::invalid_argument("l1_coefficients: T_final must be positive");

    L1Coefficients c;
    c.alpha = alpha;
    c.N = N;
    c.mu = T_final / static_cast<double>(N);
    c.kappa = 1.0 / (std::tgamma(2.0 - alpha) * std::pow(c.mu, alpha));
    c.a.resize(N);
    const double e = 1.0 - alpha;
    for (std::size_t j = 0; j < N; ++j) {
        const auto jd = static_cast<double>(j);
        c.a[j] = std::pow(jd + 1.0, e) - std::pow(jd, e);
    }
    c.l.resize(N);
    c.l[0] = c.kappa * c.a[0];
    for (std::size_t k = 1; k < N; ++k) c.l[k] = c.kappa * (c.a[k] - c.a[k - 1]);
    return c;
}

LowerTriToeplitz build_B(const L1Coefficients& coeffs) {
    std::vector<double> col(coeffs.N);
    col[0] = coeffs.a[0];
    for (std::size_t k = 1; k < coeffs.N; ++k) col[k] = coeffs.a[k] - coeffs.a[k - 1];
    return LowerTriToeplitz(std::move(col));
}

double l1_weight(double alpha, std::size_t j) {
    if (j == 0) return 1.0;
    const auto jd = static_cast<double>(j);
    const double e = 1.0 - alpha;
    return std::pow(jd, e) * std::expm1(e * std::log1p(1.0 / jd));
}

double SymbolValue::tail_bound() const {
    return std::min(tail_bound_monotone, tail_bound_oscillatory);
}

SymbolValue g_alpha_eval(double phi, double alpha, std::size_t K) {
    if (K == 0) throw std::invalid_argument("g_alpha_eval: K must be positive");
    // Compensated summation; the terms shrink like j^{-1-alpha} and K reaches 1e6.
    double re = 1.0, im = 0.0, re_c = 0.0, im_c = 0.0;
    auto kahan = [](double& sum, double& comp, double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    double prev = 1.0;
    for (std::size_t j = 1; j <= K; ++j) {
        const double cur = l1_weight(alpha, j);
        const double b = cur - prev;
        const double arg = static_cast<double>(j) * phi;
        kahan(re, re_c, b * std::cos(arg));
        kahan(im, im_c, b * std::sin(arg));
        prev = cur;
    }
    SymbolValue out;
    out.value = {re, im};
    out.tail_bound_monotone = prev;
    const double next_gap = std::abs(l1_weight(alpha, K + 1) - prev);
    const double s = std::abs(std::sin(0.5 * phi));
    out.tail_bound_oscillatory = s > 0.0 ? next_gap / s : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace taupint
