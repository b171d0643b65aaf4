// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/covariance.hpp"
#include "noisecorr/error.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace noisecorr;

namespace {
constexpr double kPi = std::numbers::pi;
}

// =============================================================================
// build_covariance
// =============================================================================

TEST(BuildCovariance, ZeroRhoIsIdentity) {
    for (double phi : {0.0, 1.0, 4.0}) {
        const Matrix4 m = build_covariance({1.0, 1.0, 0.0, phi});
        EXPECT_EQ(m, Matrix4::Identity());
    }
}

TEST(BuildCovariance, PerfectCorrelationIsSingular) {
    const Matrix4 m = build_covariance({1.0, 1.0, 1.0, 0.0});
    const Matrix2 id = Matrix2::Identity();
    EXPECT_EQ(Matrix2(m.block<2, 2>(0, 0)), id);
    EXPECT_EQ(Matrix2(m.block<2, 2>(0, 2)), id);
    EXPECT_EQ(Matrix2(m.block<2, 2>(2, 0)), id);
    EXPECT_EQ(Matrix2(m.block<2, 2>(2, 2)), id);
    EXPECT_NEAR(m.determinant(), 0.0, 1e-12);
}

TEST(BuildCovariance, ReflectionQuarterTurn) {
    const Matrix4 m = build_covariance({2.0, 0.5, 0.6, kPi / 2, CouplingKind::Reflection});
    const Matrix4 expected = oracle::model_by_entries(2.0, 0.5, 0.6, kPi / 2, true);
    EXPECT_NEAR((m - expected).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_NEAR(m(0, 2), 0.0, 1e-15);
    EXPECT_NEAR(m(0, 3), 0.6, 1e-15);
    EXPECT_NEAR(m(1, 2), 0.6, 1e-15);
    EXPECT_NEAR(m(1, 3), 0.0, 1e-15);
}

TEST(BuildCovariance, MatchesEntrywiseExpansion) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> power(0.1, 5.0), unit(0.0, 1.0), angle(0.0, 2 * kPi);
    for (int i = 0; i < 200; ++i) {
        const double p1 = power(rng), p2 = power(rng), rho = unit(rng), phi = angle(rng);
        for (bool refl : {false, true}) {
            const auto kind = refl ? CouplingKind::Reflection : CouplingKind::Rotation;
            const Matrix4 m = build_covariance({p1, p2, rho, phi, kind});
            EXPECT_LT((m - oracle::model_by_entries(p1, p2, rho, phi, refl)).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(BuildCovariance, RejectsInvalidParameters) {
    EXPECT_THROW(QtmsCovariance(0.0, 1.0, 0.5, 0.0), InvalidArgument);
    EXPECT_THROW(QtmsCovariance(1.0, -1.0, 0.5, 0.0), InvalidArgument);
    EXPECT_THROW(QtmsCovariance(1.0, 1.0, 1.5, 0.0), InvalidArgument);
    EXPECT_THROW(QtmsCovariance(1.0, 1.0, -0.1, 0.0), InvalidArgument);
    EXPECT_THROW(QtmsCovariance(1.0, 1.0, 0.5, NAN), InvalidArgument);
}

TEST(BuildCovariance, PhaseIsCanonicalized) {
    EXPECT_DOUBLE_EQ(QtmsCovariance(1, 1, 0.5, -kPi / 2).phi(), 1.5 * kPi);
    EXPECT_DOUBLE_EQ(QtmsCovariance(1, 1, 0.5, 2 * kPi).phi(), 0.0);
    EXPECT_EQ(canonical_phase(-1e-300), 0.0);
    EXPECT_LT(canonical_phase(7.0 * kPi), 2 * kPi);
}

TEST(CouplingKind, ParsesNames) {
    EXPECT_EQ(parse_coupling("rotation"), CouplingKind::Rotation);
    EXPECT_EQ(parse_coupling("Reflection"), CouplingKind::Reflection);
    EXPECT_THROW(parse_coupling("shear"), InvalidArgument);
    EXPECT_EQ(to_string(CouplingKind::Reflection), "reflection");
}

// =============================================================================
// Matrix properties (random parameters)
// =============================================================================

class CovarianceProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{2024};
    std::uniform_real_distribution<double> power{0.05, 20.0};
    std::uniform_real_distribution<double> angle{0.0, 2 * kPi};
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    CouplingKind kind() { return unit(rng) < 0.5 ? CouplingKind::Rotation : CouplingKind::Reflection; }
};

TEST_F(CovarianceProperties, SymmetricAndPositiveDefiniteBelowOne) {
    for (int i = 0; i < 500; ++i) {
        const QtmsCovariance p(power(rng), power(rng), 0.999 * unit(rng), angle(rng), kind());
        const Matrix4 m = build_covariance(p);
        EXPECT_EQ(m, m.transpose());
        const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix4>(m).eigenvalues().minCoeff();
        EXPECT_GT(min_eig, 0.0);
    }
}

TEST_F(CovarianceProperties, DeterminantVanishesAtUnitRho) {
    for (int i = 0; i < 200; ++i) {
        const QtmsCovariance p(power(rng), power(rng), 1.0, angle(rng), kind());
        const Matrix4 m = build_covariance(p);
        // Relative to the product of the diagonal, which is det at rho = 0.
        const double scale = p.p1() * p.p1() * p.p2() * p.p2();
        EXPECT_NEAR(m.determinant() / scale, 0.0, 1e-9);
    }
}

TEST_F(CovarianceProperties, FullTurnLeavesMatrixUnchanged) {
    for (int i = 0; i < 200; ++i) {
        const double phi = angle(rng);
        const double p1 = power(rng), p2 = power(rng), rho = unit(rng);
        const auto k = kind();
        const Matrix4 a = build_covariance({p1, p2, rho, phi, k});
        const Matrix4 b = build_covariance({p1, p2, rho, phi + 2 * kPi, k});
        // phi + 2 pi is rounded before wrapping, so equality holds to a few ulps.
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14 * std::max(p1, p2));
    }
}

TEST_F(CovarianceProperties, SignAbsorbedByHalfTurn) {
    for (int i = 0; i < 200; ++i) {
        const double phi = angle(rng);
        const QtmsCovariance p(power(rng), power(rng), unit(rng), phi, CouplingKind::Rotation);
        const Matrix4 a = build_covariance(p);
        const Matrix4 b = build_covariance({p.p1(), p.p2(), p.rho(), phi + kPi, CouplingKind::Rotation});
        // -rho at phi equals rho at phi + pi: cross blocks flip sign, power blocks stay.
        Matrix4 negated = a;
        negated.block<2, 2>(0, 2) *= -1.0;
        negated.block<2, 2>(2, 0) *= -1.0;
        EXPECT_LT((negated - b).cwiseAbs().maxCoeff(), 1e-13 * std::max(p.p1(), p.p2()));
    }
}

// =============================================================================
// Signal decomposition
// =============================================================================

TEST(RhoFromDecomposition, Examples) {
    EXPECT_DOUBLE_EQ(rho_from_decomposition({1.0, 0.0, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(rho_from_decomposition({1.0, 1.0, 0.0}), 1.0 / std::sqrt(2.0));
    const double direct = rho_from_decomposition({2.0, 1.0, 0.5});
    EXPECT_NEAR(direct, 1.0 / std::sqrt(1.5 * 1.25), 1e-15);
    EXPECT_NEAR(direct, std::sqrt((1.0 - 1.0 / 3.0) * (1.0 - 0.5 / 2.5)), 1e-12);
}

TEST(RhoFromDecomposition, ZeroCommonPower) {
    EXPECT_EQ(rho_from_decomposition({0.0, 1.0, 0.0}), 0.0);
    EXPECT_EQ(rho_from_decomposition({0.0, 0.0, 2.0}), 0.0);
    EXPECT_THROW(rho_from_decomposition({0.0, 0.0, 0.0}), DegenerateInput);
    EXPECT_THROW(rho_from_decomposition({1.0, -1.0, 0.0}), InvalidArgument);
}

TEST(RhoFromTotals, Examples) {
    EXPECT_DOUBLE_EQ(rho_from_totals(1, 1, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(rho_from_totals(1, 1, 1, 1), 0.0);
    EXPECT_NEAR(rho_from_totals(3.0, 2.5, 1.0, 0.5), rho_from_decomposition({2.0, 1.0, 0.5}), 1e-12);
    EXPECT_THROW(rho_from_totals(1.0, 1.0, 1.5, 0.0), InvalidArgument);
    EXPECT_THROW(rho_from_totals(1.0, 1.0, 0.0, 1.5), InvalidArgument);
    EXPECT_THROW(rho_from_totals(0.0, 1.0, 0.0, 0.0), InvalidArgument);
}

TEST(RhoFromTotals, AgreesWithDecompositionOnRandomInputs) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const SignalDecomposition d{u(rng) + 1e-3, u(rng), u(rng)};
        const double a = rho_from_decomposition(d);
        const double b = rho_from_totals(d.total_received(), d.total_reference(), d.pn1, d.pn2);
        ASSERT_NEAR(a, b, 1e-12) << "p=" << d.p << " pn1=" << d.pn1 << " pn2=" << d.pn2;
        ASSERT_GT(a, 0.0);
        ASSERT_LE(a, 1.0);
    }
}

TEST(Rho0FromReference, Examples) {
    EXPECT_DOUBLE_EQ(rho0_from_reference(1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(rho0_from_reference(1.0, 1.0), 0.0);
    EXPECT_NEAR(rho0_from_reference(63.1e-3, 63.1e-5), 0.99, 1e-15);
    EXPECT_THROW(rho0_from_reference(1.0, 2.0), InvalidArgument);
    EXPECT_THROW(rho0_from_reference(0.0, 0.0), InvalidArgument);
}
