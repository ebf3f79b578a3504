#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "taupint/l1.hpp"
#include "test_util.hpp"

using namespace taupint;

namespace {

// Discrete Caputo derivative at t_n from the all-at-once rows: kappa (B u)_n
// plus the initial-value weight.
double discrete_caputo(const L1Coefficients& c, const std::vector<double>& u, double u0, std::size_t n) {
    const auto B = build_B(c);
    const auto col = B.first_column();
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += col[n - k] * u[k - 1];
    return c.kappa * s + c.initial_weight(n) * u0;
}

}  // namespace

TEST(L1Coefficients, ClosedFormEntries) {
    const double alpha = 0.3;
    const auto c = l1_coefficients(alpha, 5, 1.0);
    EXPECT_DOUBLE_EQ(c.mu, 0.2);
    EXPECT_NEAR(c.kappa, 1.0 / (std::tgamma(1.7) * std::pow(0.2, 0.3)), 1e-14);
    EXPECT_DOUBLE_EQ(c.a[0], 1.0);
    EXPECT_NEAR(c.a[1], std::pow(2.0, 0.7) - 1.0, 1e-15);
    EXPECT_NEAR(c.a[4], std::pow(5.0, 0.7) - std::pow(4.0, 0.7), 1e-15);
    EXPECT_NEAR(c.l[0], c.kappa, 1e-14);
    EXPECT_NEAR(c.l[2], c.kappa * (c.a[2] - c.a[1]), 1e-14);
    EXPECT_NEAR(c.initial_weight(3), -c.kappa * c.a[2], 1e-14);
}

TEST(L1Coefficients, WeightsAreDecreasingAndPositive) {
    for (double alpha : {0.1, 0.5, 0.9}) {
        const auto c = l1_coefficients(alpha, 200, 1.0);
        for (std::size_t j = 1; j < c.a.size(); ++j) {
            EXPECT_GT(c.a[j], 0.0);
            EXPECT_LT(c.a[j], c.a[j - 1]);
            EXPECT_LT(c.l[j], 0.0);
        }
    }
}

TEST(L1Coefficients, RejectsBadInput) {
    EXPECT_THROW(l1_coefficients(0.0, 4, 1.0), std::invalid_argument);
    EXPECT_THROW(l1_coefficients(1.0, 4, 1.0), std::invalid_argument);
    EXPECT_THROW(l1_coefficients(0.5, 0, 1.0), std::invalid_argument);
    EXPECT_THROW(l1_coefficients(0.5, 4, -1.0), std::invalid_argument);
}

TEST(L1Scheme, ConstantsHaveZeroDerivative) {
    const auto c = l1_coefficients(0.4, 30, 2.0);
    const std::vector<double> u(30, 3.5);
    for (std::size_t n = 1; n <= 30; ++n) EXPECT_NEAR(discrete_caputo(c, u, 3.5, n), 0.0, 1e-11);
}

TEST(L1Scheme, ExactOnLinearFunctions) {
    // Piecewise-linear interpolation reproduces t, so D^alpha t = t^{1-alpha} / Gamma(2-alpha) exactly.
    const double alpha = 0.65;
    const auto c = l1_coefficients(alpha, 40, 1.0);
    std::vector<double> u(40);
    for (std::size_t k = 1; k <= 40; ++k) u[k - 1] = static_cast<double>(k) * c.mu;
    for (std::size_t n = 1; n <= 40; ++n) {
        const double t = static_cast<double>(n) * c.mu;
        EXPECT_NEAR(discrete_caputo(c, u, 0.0, n), std::pow(t, 1.0 - alpha) / std::tgamma(2.0 - alpha), 1e-11);
    }
}

TEST(L1Scheme, ConvergesAtOrderTwoMinusAlpha) {
    const double alpha = 0.5;
    auto err = [&](std::size_t N) {
        const auto c = l1_coefficients(alpha, N, 1.0);
        std::vector<double> u(N);
        for (std::size_t k = 1; k <= N; ++k) u[k - 1] = std::pow(static_cast<double>(k) * c.mu, 2.0);
        const double exact = 2.0 / std::tgamma(3.0 - alpha);  // D^alpha t^2 at t = 1
        return std::abs(discrete_caputo(c, u, 0.0, N) - exact);
    };
    const double ratio = err(256) / err(512);
    EXPECT_NEAR(ratio, std::pow(2.0, 2.0 - alpha), 0.1 * std::pow(2.0, 2.0 - alpha));
}

TEST(L1Weight, MatchesDirectFormulaAndStaysAccurate) {
    const double alpha = 0.3;
    for (std::size_t j : {1, 2, 10, 1000}) {
        const double direct = std::pow(j + 1.0, 0.7) - std::pow(static_cast<double>(j), 0.7);
        EXPECT_NEAR(l1_weight(alpha, j), direct, 1e-12 * direct) << j;
    }
    // For huge j the difference of powers cancels; compare with long double.
    const std::size_t j = 100000000;
    const long double ref = std::pow(static_cast<long double>(j) + 1.0L, 0.7L) - std::pow(static_cast<long double>(j), 0.7L);
    EXPECT_NEAR(l1_weight(alpha, j), static_cast<double>(ref), 1e-9 * static_cast<double>(ref));
}

TEST(GAlpha, PartialSumMatchesDirectSummation) {
    const double alpha = 0.4, phi = 1.1;
    const std::size_t K = 500;
    std::complex<double> ref = 1.0;
    for (std::size_t j = 1; j <= K; ++j) {
        const double b = l1_weight(alpha, j) - l1_weight(alpha, j - 1);
        ref += b * std::polar(1.0, static_cast<double>(j) * phi);
    }
    const auto g = g_alpha_eval(phi, alpha, K);
    EXPECT_NEAR(g.value.real(), ref.real(), 1e-13);
    EXPECT_NEAR(g.value.imag(), ref.imag(), 1e-13);
}

TEST(GAlpha, TailBoundsCoverTheTruncation) {
    for (double alpha : {0.2, 0.8}) {
        for (double phi : {0.01, 0.3, 2.0, std::numbers::pi}) {
            const auto coarse = g_alpha_eval(phi, alpha, 1000);
            const auto fine = g_alpha_eval(phi, alpha, 400000);
            const double gap = std::abs(coarse.value - fine.value);
            EXPECT_LE(gap, coarse.tail_bound_monotone + 1e-12);
            EXPECT_LE(gap, coarse.tail_bound_oscillatory + 1e-12);
        }
    }
}

TEST(GAlpha, RealPartPositiveAndQuotientBelowTan) {
    for (double alpha : {0.1, 0.5, 0.9}) {
        const double tanb = std::tan(0.5 * alpha * std::numbers::pi);
        for (double phi : {0.05, 0.5, 1.5, 3.0}) {
            const auto g = g_alpha_eval(phi, alpha, 200000);
            EXPECT_GT(g.value.real() - g.tail_bound(), 0.0);
            EXPECT_LE(std::abs(g.value.imag()), tanb * g.value.real() + (1.0 + tanb) * g.tail_bound());
        }
    }
}
