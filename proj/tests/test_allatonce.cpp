#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "taupint/allatonce.hpp"
#include "taupint/errors.hpp"
#include "taupint/tau.hpp"
#include "test_util.hpp"

using namespace taupint;
using testutil::max_abs_diff;
using testutil::random_vector;

namespace {

SpatialSpec grid(SpatialKind kind, std::vector<std::size_t> m) {
    SpatialSpec s;
    s.kind = kind;
    for (std::size_t i = 0; i < m.size(); ++i) {
        AxisSpec a;
        a.m = m[i];
        a.beta = 1.3 + 0.25 * static_cast<double>(i);
        a.k_plus = 0.4 + static_cast<double>(i);
        a.k_minus = 0.7;
        s.axes.push_back(a);
    }
    return s;
}

// G (x) I_N + kappa I_J (x) B from naive dense factors.
Eigen::MatrixXd kron_oracle(const AllAtOnceOperator& op) {
    const auto N = static_cast<Eigen::Index>(op.N());
    const auto J = static_cast<Eigen::Index>(op.J());
    const Eigen::MatrixXd G = op.G().dense();
    const Eigen::MatrixXd B = testutil::naive_toeplitz(op.B().as_toeplitz().diag_coeffs());
    return testutil::kron(G, Eigen::MatrixXd::Identity(N, N)) +
           op.kappa() * testutil::kron(Eigen::MatrixXd::Identity(J, J), B);
}

void expect_apply_matches(const SpatialSpec& spec, double alpha, std::size_t N, unsigned seed) {
    const auto c = l1_coefficients(alpha, N, 1.0);
    const AllAtOnceOperator op(assemble_G(spec), c);
    const auto D = kron_oracle(op);
    EXPECT_LE((op.dense() - D).cwiseAbs().maxCoeff(), 1e-10 * D.cwiseAbs().maxCoeff());
    const auto u = random_vector(op.size(), seed);
    const Eigen::VectorXd ref = D * testutil::to_eigen(u);
    const double scale = ref.cwiseAbs().maxCoeff();
    EXPECT_LE(max_abs_diff(apply_A(op, u), std::span<const double>(ref.data(), ref.size())) / scale, 1e-10);
}

}  // namespace

TEST(AllAtOnce, ApplyMatchesKroneckerOracle) {
    expect_apply_matches(grid(SpatialKind::laplacian, {3, 3}), 0.5, 4, 1);
    expect_apply_matches(grid(SpatialKind::riesz, {5, 4}), 0.3, 7, 2);
    expect_apply_matches(grid(SpatialKind::riemann_liouville, {6, 5}), 0.8, 9, 3);
    expect_apply_matches(grid(SpatialKind::riemann_liouville, {3, 4, 2}), 0.2, 6, 4);
    expect_apply_matches(grid(SpatialKind::laplacian, {16, 16}), 0.6, 16, 5);
}

TEST(AllAtOnce, SingleTimeStep) {
    const auto c = l1_coefficients(0.4, 1, 1.0);
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::laplacian, {4, 3})), c);
    const Eigen::MatrixXd ref =
        op.G().dense() + c.kappa * c.a[0] * Eigen::MatrixXd::Identity(12, 12);
    EXPECT_LE((op.dense() - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(AllAtOnce, SingleSpatialPoint) {
    const auto c = l1_coefficients(0.4, 6, 1.0);
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::laplacian, {1})), c);
    const double g0 = op.G().block(0).coeff(0);
    const Eigen::MatrixXd ref = g0 * Eigen::MatrixXd::Identity(6, 6) + c.kappa * materialize(op.B());
    EXPECT_LE((op.dense() - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AllAtOnce, ApplyRejectsWrongLength) {
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::laplacian, {3})), l1_coefficients(0.5, 2, 1.0));
    std::vector<double> u(5), y(6);
    EXPECT_THROW(op.apply(u, y), std::invalid_argument);
}

TEST(AssembleRhs, ConstantSourceZeroInitial) {
    ProblemSpec p;
    p.spatial = grid(SpatialKind::laplacian, {3, 2});
    p.alpha = 0.5;
    p.N = 5;
    p.source = [](std::span<const double>, double) { return 2.5; };
    p.initial = [](std::span<const double>) { return 0.0; };
    const auto f = assemble_rhs(p, l1_coefficients(0.5, 5, 1.0));
    ASSERT_EQ(f.size(), 30u);
    for (double v : f) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(AssembleRhs, InitialValueEntersThroughL1Weights) {
    ProblemSpec p;
    p.spatial = grid(SpatialKind::laplacian, {3});
    p.alpha = 0.35;
    p.N = 4;
    p.T_final = 2.0;
    p.source = [](std::span<const double> x, double t) { return x[0] * t; };
    p.initial = [](std::span<const double> x) { return 1.0 + x[0]; };
    const auto c = l1_coefficients(0.35, 4, 2.0);
    const auto f = assemble_rhs(p, c);
    for (std::size_t j = 0; j < 3; ++j) {
        const double x = 0.25 * (j + 1.0);
        for (std::size_t n = 1; n <= 4; ++n) {
            const double ref = x * (n * 0.5) + c.kappa * c.a[n - 1] * (1.0 + x);
            EXPECT_NEAR(f[(n - 1) + 4 * j], ref, 1e-13);
        }
    }
}

TEST(GridPoint, DecodesXOneFastest) {
    const auto s = grid(SpatialKind::laplacian, {3, 4});
    std::vector<double> x(2);
    grid_point(s, 3 + 2, x);  // i1 = 2, i2 = 1
    EXPECT_DOUBLE_EQ(x[0], 0.75);
    EXPECT_DOUBLE_EQ(x[1], 0.4);
}

TEST(Preconditioner, OneDimensionalLaplacianClosedForm) {
    SpatialSpec s;
    s.kind = SpatialKind::laplacian;
    AxisSpec a;
    a.m = 3;
    a.upper = 4.0;  // h = 1
    s.axes.push_back(a);
    const auto c = l1_coefficients(0.5, 1, 1.0);
    const AllAtOnceOperator op(assemble_G(s), c);
    const auto P = build_preconditioner(op);
    for (std::size_t i = 0; i < 3; ++i) {
        const double ref = 2.0 - 2.0 * std::cos(std::numbers::pi * (i + 1.0) / 4.0) + c.kappa * c.a[0];
        EXPECT_NEAR(P.eigenvalue(i, 0), ref, 1e-13);
    }
}

TEST(Preconditioner, DenseMatchesTauKroneckerAndEigenvalues) {
    for (auto kind : {SpatialKind::laplacian, SpatialKind::riesz, SpatialKind::riemann_liouville}) {
        const auto c = l1_coefficients(0.45, 4, 1.0);
        const AllAtOnceOperator op(assemble_G(grid(kind, {3, 3})), c);
        const auto P = build_preconditioner(op);
        // Independent assembly from dense tau blocks.
        Eigen::MatrixXd Pt = Eigen::MatrixXd::Zero(9, 9);
        const auto t1 = tau_dense(symmetric_part(op.G().block(0)).first_column());
        const auto t2 = tau_dense(symmetric_part(op.G().block(1)).first_column());
        Pt += testutil::kron(Eigen::MatrixXd::Identity(3, 3), t1);
        Pt += testutil::kron(t2, Eigen::MatrixXd::Identity(3, 3));
        const auto tb = tau_dense(symmetric_part(op.B()).first_column());
        const Eigen::MatrixXd ref = testutil::kron(Pt, Eigen::MatrixXd::Identity(4, 4)) +
                                    c.kappa * testutil::kron(Eigen::MatrixXd::Identity(9, 9), tb);
        const auto D = P.dense();
        EXPECT_LE((D - ref).cwiseAbs().maxCoeff(), 1e-9 * ref.cwiseAbs().maxCoeff());
        EXPECT_LE((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-9 * ref.cwiseAbs().maxCoeff());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
        std::vector<double> lam;
        for (std::size_t j = 0; j < 9; ++j) {
            for (std::size_t n = 0; n < 4; ++n) lam.push_back(P.eigenvalue(j, n));
        }
        std::sort(lam.begin(), lam.end());
        for (std::size_t i = 0; i < lam.size(); ++i) {
            EXPECT_NEAR(lam[i], es.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-9 * lam.back());
        }
    }
}

TEST(Preconditioner, LaplacianSpatialFactorIsGItself) {
    const auto c = l1_coefficients(0.5, 3, 1.0);
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::laplacian, {5, 4})), c);
    const auto P = build_preconditioner(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.G().dense());
    std::vector<double> lp(P.lambda_P().begin(), P.lambda_P().end());
    std::sort(lp.begin(), lp.end());
    for (std::size_t i = 0; i < lp.size(); ++i) EXPECT_NEAR(lp[i], es.eigenvalues()(i), 1e-9 * lp.back());
}

TEST(Preconditioner, TemporalFactorBoundedBelowByLastWeight) {
    const auto c = l1_coefficients(0.3, 64, 1.0);
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::laplacian, {3})), c);
    const auto P = build_preconditioner(op);
    const double umin = *std::min_element(P.upsilon().begin(), P.upsilon().end());
    EXPECT_GE(umin, c.a[63]);
}

TEST(Preconditioner, InverseAndSquareRoot) {
    const auto c = l1_coefficients(0.6, 4, 1.0);
    const AllAtOnceOperator op(assemble_G(grid(SpatialKind::riesz, {3, 3})), c);
    const auto P = build_preconditioner(op);
    const auto v = random_vector(P.size(), 77);
    std::vector<double> Pv(P.size());
    P.apply(v, Pv);
    EXPECT_LE(max_abs_diff(apply_P_inv(P, Pv), v), 1e-9 * testutil::max_abs(v));
    const auto twice = apply_P_inv_sqrt(P, apply_P_inv_sqrt(P, v));
    EXPECT_LE(max_abs_diff(twice, apply_P_inv(P, v)), 1e-11 * testutil::max_abs(twice));
    // Dense solve oracle.
    const Eigen::VectorXd ref = P.dense().ldlt().solve(testutil::to_eigen(v));
    EXPECT_LE(max_abs_diff(apply_P_inv(P, v), std::span<const double>(ref.data(), ref.size())),
              1e-9 * ref.cwiseAbs().maxCoeff());
}

TEST(Preconditioner, UnitSpectrumIsIdentity) {
    const TauPinTPreconditioner P(std::vector<double>(6, 1.0), std::vector<double>(5, 0.0), 1.0, {2, 3});
    const auto v = random_vector(30, 5);
    EXPECT_LE(max_abs_diff(apply_P_inv(P, v), v), 1e-13);
    EXPECT_LE(max_abs_diff(apply_P_inv_sqrt(P, v), v), 1e-13);
}

TEST(Preconditioner, RejectsNonpositiveSpectrum) {
    EXPECT_THROW(TauPinTPreconditioner({1.0, -2.0}, {0.5}, 1.0, {2}), InvariantViolation);
    EXPECT_THROW(TauPinTPreconditioner({1.0, 2.0}, {0.5}, 1.0, {3}), std::invalid_argument);
}
