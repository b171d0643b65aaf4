// SPDX-License-Identifier: Apache-2.0
//
// Gaussian voltage synthesis for the four-channel model.
//
// Reproducibility contract: a block is a pure function of (params, n, seed).
// The generator is std::mt19937_64 seeded with `seed`; standard normals come
// from the Box-Muller transform applied to consecutive pairs of 53-bit
// uniforms, cosine branch first. Rows are drawn in order and each row
// consumes exactly four normals (two Box-Muller pairs), so the stream is
// row-major, channel-minor.
#pragma once

#include "noisecorr/covariance.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace noisecorr {

/// Column order of a SampleBlock row.
enum Channel : std::size_t { I1 = 0, Q1 = 1, I2 = 2, Q2 = 3 };

/// Value substituted for rho == 1 when degenerate synthesis is allowed.
inline constexpr double kDegenerateRho = 1.0 - 1e-12;

/// N rows of (I1, Q1, I2, Q2) voltages.
struct SampleBlock {
    Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor> channels;
    std::uint64_t seed = 0;
    std::optional<QtmsCovariance> params;

    std::size_t size() const noexcept { return static_cast<std::size_t>(channels.rows()); }
};

/// Standard normal stream with the documented algorithm.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double uniform_open_closed();

    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

struct SynthesisOptions {
    /// Substitute kDegenerateRho for rho == 1 instead of throwing.
    bool allow_degenerate = false;
};

/// Draws n i.i.d. zero-mean rows with covariance build_covariance(params).
/// The returned block records the params actually used (rho may have been
/// replaced by kDegenerateRho).
SampleBlock synthesize(const QtmsCovariance& params, std::size_t n, std::uint64_t seed,
                       SynthesisOptions options = {});

enum class CovarianceEstimator {
    /// (1/n) sum x x^T, no mean removal. The model is zero-mean.
    KnownZeroMean,
    /// 1/(n-1) sum (x - mean)(x - mean)^T.
    MeanSubtracted,
};

/// Sample covariance S-hat of a block. Requires n >= 2.
Matrix4 sample_covariance(const SampleBlock& block,
                          CovarianceEstimator estimator = CovarianceEstimator::KnownZeroMean);

} // namespace noisecorr
