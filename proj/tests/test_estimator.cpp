// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/error.hpp"
#include "noisecorr/estimator.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace noisecorr;

namespace {
constexpr double kPi = std::numbers::pi;
}

// =============================================================================
// Examples
// =============================================================================

TEST(Fit, RecoversExactModel) {
    const Matrix4 s = build_covariance({1.3, 0.7, 0.5, 1.1});
    const FitResult f = fit(s, CouplingKind::Rotation);
    EXPECT_NEAR(f.p1, 1.3, 1e-15);
    EXPECT_NEAR(f.p2, 0.7, 1e-15);
    EXPECT_NEAR(f.rho, 0.5, 1e-14);
    EXPECT_NEAR(f.phi, 1.1, 1e-14);
    EXPECT_LT(f.residual, 1e-14);
    EXPECT_FALSE(f.clipped);
}

TEST(Fit, IdentityHasZeroRhoAndZeroPhase) {
    const FitResult f = fit(Matrix4::Identity(), CouplingKind::Rotation);
    EXPECT_EQ(f.p1, 1.0);
    EXPECT_EQ(f.p2, 1.0);
    EXPECT_EQ(f.rho, 0.0);
    EXPECT_EQ(f.phi, 0.0);
    EXPECT_EQ(f.residual, 0.0);
}

TEST(Fit, RecoversFromSamples) {
    const QtmsCovariance truth(1.0, 1.0, 0.8, 2.0);
    const Matrix4 s = sample_covariance(synthesize(truth, 100000, 31));
    const FitResult f = fit(s, CouplingKind::Rotation);
    EXPECT_NEAR(f.rho, 0.8, 0.02);
    EXPECT_LT(oracle::angle_distance(f.phi, 2.0), 0.05);

    const auto grid = oracle::grid_search_fit(s, f.p1, f.p2, false);
    EXPECT_LE(std::abs(grid.rho - f.rho), 1e-3 + 1e-12);
    EXPECT_LE(oracle::angle_distance(grid.phi, f.phi), 1e-3 + 1e-12);
    EXPECT_LE(f.residual, grid.residual + 1e-12);
}

TEST(Fit, ClipsAboveUnitCorrelation) {
    // Cross-block larger than the powers allow.
    Matrix4 s = build_covariance({1.0, 1.0, 1.0, 0.4});
    s.block<2, 2>(0, 2) *= 1.2;
    s.block<2, 2>(2, 0) *= 1.2;
    const FitResult f = fit(s, CouplingKind::Rotation);
    EXPECT_TRUE(f.clipped);
    EXPECT_EQ(f.rho, 1.0);
    EXPECT_NEAR(f.phi, 0.4, 1e-12);
    EXPECT_DOUBLE_EQ(f.p1, 1.0);
    EXPECT_GT(f.residual, 0.0);
}

TEST(Fit, UsesAverageOfBothCrossBlocks) {
    Matrix4 s = build_covariance({1.0, 2.0, 0.3, 0.5});
    const Matrix4 exact = s;
    s(0, 2) += 1e-12;
    s(2, 0) -= 1e-12;
    const FitResult f = fit(s, CouplingKind::Rotation);
    const FitResult g = fit(exact, CouplingKind::Rotation);
    EXPECT_NEAR(f.rho, g.rho, 1e-15);
}

TEST(Fit, RejectsBadInput) {
    Matrix4 asym = Matrix4::Identity();
    asym(0, 2) = 0.5;
    EXPECT_THROW(fit(asym, CouplingKind::Rotation), InvalidArgument);

    Matrix4 nan = Matrix4::Identity();
    nan(1, 1) = NAN;
    EXPECT_THROW(fit(nan, CouplingKind::Rotation), InvalidArgument);

    Matrix4 dead = Matrix4::Identity();
    dead(2, 2) = dead(3, 3) = 0.0;
    EXPECT_THROW(fit(dead, CouplingKind::Rotation), DegenerateInput);
    EXPECT_THROW(fit(Matrix4::Zero(), CouplingKind::Reflection), DegenerateInput);
}

// =============================================================================
// Properties
// =============================================================================

class FitProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{77};
    std::uniform_real_distribution<double> power{0.05, 10.0};
    std::uniform_real_distribution<double> angle{0.0, 2 * kPi};
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    QtmsCovariance random_params() {
        return {power(rng), power(rng), 0.999 * unit(rng), angle(rng),
                unit(rng) < 0.5 ? CouplingKind::Rotation : CouplingKind::Reflection};
    }
};

TEST_F(FitProperties, FixedPoint) {
    for (int i = 0; i < 1000; ++i) {
        const QtmsCovariance p = random_params();
        const FitResult f = fit(build_covariance(p), p.coupling());
        ASSERT_LT(f.residual, 1e-10);
        ASSERT_NEAR(f.p1, p.p1(), 1e-12 * p.p1());
        ASSERT_NEAR(f.p2, p.p2(), 1e-12 * p.p2());
        ASSERT_NEAR(f.rho, p.rho(), 1e-12);
        if (p.rho() > 1e-6) ASSERT_LT(oracle::angle_distance(f.phi, p.phi()), 1e-9);
    }
}

TEST_F(FitProperties, ScaleEquivariance) {
    for (int i = 0; i < 200; ++i) {
        const QtmsCovariance p = random_params();
        const Matrix4 s = sample_covariance(synthesize(p, 50, i));
        const double alpha = 0.01 + 100.0 * unit(rng);
        const FitResult a = fit(s, p.coupling());
        const FitResult b = fit(alpha * s, p.coupling());
        ASSERT_NEAR(b.p1, alpha * a.p1, 1e-12 * alpha * a.p1);
        ASSERT_NEAR(b.p2, alpha * a.p2, 1e-12 * alpha * a.p2);
        ASSERT_NEAR(b.rho, a.rho, 1e-12);
        ASSERT_LT(oracle::angle_distance(b.phi, a.phi), 1e-10);
    }
}

TEST_F(FitProperties, BeatsRandomProbes) {
    for (int i = 0; i < 20; ++i) {
        const QtmsCovariance p = random_params();
        const Matrix4 s = sample_covariance(synthesize(p, 1000, 500 + i));
        const FitResult f = fit(s, p.coupling());
        const bool refl = p.coupling() == CouplingKind::Reflection;
        std::uniform_real_distribution<double> around(0.5, 1.5);
        for (int probe = 0; probe < 2000; ++probe) {
            const Matrix4 m = oracle::model_by_entries(f.p1 * around(rng), f.p2 * around(rng), unit(rng),
                                                       angle(rng), refl);
            ASSERT_LE(f.residual, oracle::frobenius_distance(m, s) + 1e-12);
        }
    }
}

TEST_F(FitProperties, MatchesCoarseGridSearch) {
    for (int i = 0; i < 10; ++i) {
        const QtmsCovariance p = random_params();
        const Matrix4 s = sample_covariance(synthesize(p, 1000, 900 + i));
        const FitResult f = fit(s, p.coupling());
        const auto grid = oracle::grid_search_fit(s, f.p1, f.p2, p.coupling() == CouplingKind::Reflection, 1e-2);
        ASSERT_LE(f.residual, grid.residual + 1e-12);
    }
}

TEST(FitCoupling, ReflectionFitOfRotationAtZeroPhase) {
    for (double rho : {0.2, 0.5, 0.9}) {
        const FitResult f = fit(build_covariance({1.0, 1.0, rho, 0.0, CouplingKind::Rotation}),
                                CouplingKind::Reflection);
        EXPECT_NEAR(f.rho, 0.0, 1e-15);
    }
    // At general phase the mismatched coupling only sees part of the correlation.
    const FitResult g = fit(build_covariance({1.0, 1.0, 0.8, 1.0, CouplingKind::Rotation}),
                            CouplingKind::Reflection);
    EXPECT_LT(g.rho, 0.8);
}

TEST(FitUnderH0, MedianShrinksWithN) {
    double previous = INFINITY;
    for (std::size_t n : {100u, 1000u, 10000u}) {
        std::vector<double> rho_hat;
        for (int t = 0; t < 200; ++t) {
            rho_hat.push_back(fit(sample_covariance(synthesize({1.0, 1.0, 0.0, 0.0}, n, 10 * n + t)),
                                  CouplingKind::Rotation)
                                  .rho);
        }
        std::nth_element(rho_hat.begin(), rho_hat.begin() + 100, rho_hat.end());
        const double median = rho_hat[100];
        EXPECT_LT(median, previous) << "n = " << n;
        previous = median;
    }
}

// =============================================================================
// detect
// =============================================================================

TEST(Detect, BelowThresholdIsNoDetection) {
    const SampleBlock block = synthesize({1.0, 1.0, 0.3, 0.2}, 20000, 4);
    const Detection d = detect(block, 0.5, CouplingKind::Rotation);
    EXPECT_NEAR(d.rho_hat, 0.3, 0.03);
    EXPECT_FALSE(d.detected);
    EXPECT_TRUE(detect(block, 0.2, CouplingKind::Rotation).detected);
}

TEST(Detect, UnitThresholdNeverFires) {
    for (int seed = 0; seed < 50; ++seed) {
        const SampleBlock block = synthesize({1.0, 1.0, 0.0, 0.0}, 150, seed);
        EXPECT_FALSE(detect(block, 1.0, CouplingKind::Rotation).detected);
    }
}

TEST(Detect, StrongTargetIsAlwaysDetected) {
    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const SampleBlock block = synthesize({1.0, 1.0, 0.4, 1.0}, 10000, 300 + seed);
        hits += detect(block, 0.1, CouplingKind::Rotation).detected ? 1 : 0;
    }
    EXPECT_EQ(hits, 100);
}

TEST(Detect, RejectsThresholdOutsideUnitInterval) {
    const SampleBlock block = synthesize({1.0, 1.0, 0.3, 0.0}, 10, 1);
    EXPECT_THROW(detect(block, 1.5, CouplingKind::Rotation), InvalidArgument);
    EXPECT_THROW(detect(block, -0.1, CouplingKind::Rotation), InvalidArgument);
}

TEST(Detect, ConstantChannelsAreDegenerate) {
    SampleBlock block;
    block.channels.resize(10, 4);
    block.channels.setConstant(0.25);
    EXPECT_THROW(require_fluctuating_channels(block), DegenerateInput);
    const SampleBlock ok = synthesize({1.0, 1.0, 0.3, 0.0}, 10, 1);
    EXPECT_NO_THROW(require_fluctuating_channels(ok));
}
