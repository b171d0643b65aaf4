// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/synthesis.hpp"

#include "noisecorr/error.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <iostream>
#include <numbers>

namespace noisecorr {

double NormalStream::uniform_open_closed() {
    // 53 random mantissa bits mapped to (0, 1]; never 0 so log() is finite.
    constexpr double kScale = 1.0 / 9007199254740992.0; // 2^-53
    return static_cast<double>((engine_() >> 11) + 1) * kScale;
}

double NormalStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_open_closed();
    const double u2 = uniform_open_closed();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

SampleBlock synthesize(const QtmsCovariance& params, std::size_t n, std::uint64_t seed,
                       SynthesisOptions options) {
    if (n < 1) throw InvalidArgument("sample count n must be at least 1");

    QtmsCovariance used = params;
    if (params.rho() >= 1.0) {
        if (!options.allow_degenerate) {
            throw InvalidArgument("rho = 1 gives a singular covariance; enable degenerate synthesis "
                                  "to substitute rho = 1 - 1e-12");
        }
        std::clog << "warning: rho = 1 replaced by " << kDegenerateRho << " for sampling\n";
        used = QtmsCovariance(params.p1(), params.p2(), kDegenerateRho, params.phi(),
                              params.coupling());
    }

    const Matrix4 target = build_covariance(used);
    const Eigen::LLT<Matrix4> llt(target);
    if (llt.info() != Eigen::Success) {
        throw DegenerateInput("Cholesky factorization of the target covariance failed");
    }
    const Matrix4 lower = llt.matrixL();

    SampleBlock block;
    block.seed = seed;
    block.params = used;
    block.channels.resize(static_cast<Eigen::Index>(n), 4);

    NormalStream normals(seed);
    Eigen::Vector4d z;
    for (Eigen::Index row = 0; row < block.channels.rows(); ++row) {
        for (int c = 0; c < 4; ++c) z(c) = normals.next();
        block.channels.row(row) = (lower * z).transpose();
    }
    return block;
}

Matrix4 sample_covariance(const SampleBlock& block, CovarianceEstimator estimator) {
    const auto n = block.channels.rows();
    if (n < 2) throw InvalidArgument("sample covariance needs at least 2 samples");
    if (!block.channels.allFinite()) throw InvalidArgument("sample block contains non-finite values");

    Matrix4 s;
    if (estimator == CovarianceEstimator::KnownZeroMean) {
        s = (block.channels.transpose() * block.channels) / static_cast<double>(n);
    } else {
        const Eigen::RowVector4d mean = block.channels.colwise().mean();
        const auto centered = block.channels.rowwise() - mean;
        s = (centered.transpose() * centered) / static_cast<double>(n - 1);
    }
    // Enforce exact symmetry against summation-order differences.
    return 0.5 * (s + s.transpose());
}

} // namespace noisecorr
