// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/estimator.hpp"

#include "noisecorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noisecorr {

FitResult fit(const Matrix4& s_hat, CouplingKind coupling) {
    if (!s_hat.allFinite()) throw InvalidArgument("sample covariance has non-finite entries");

    const double scale = std::max(s_hat.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (s_hat - s_hat.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        throw InvalidArgument("sample covariance is not symmetric (max |S - S^T| = " +
                              std::to_string(asym) + ")");
    }

    FitResult out;
    out.p1 = 0.5 * (s_hat(0, 0) + s_hat(1, 1));
    out.p2 = 0.5 * (s_hat(2, 2) + s_hat(3, 3));
    if (!(out.p1 > 0.0) || !(out.p2 > 0.0)) {
        throw DegenerateInput("channel power estimate is not positive; rho is undefined");
    }

    const Matrix2 m = 0.5 * (s_hat.block<2, 2>(0, 2) + s_hat.block<2, 2>(2, 0).transpose());
    double c = 0.0;
    double s = 0.0;
    if (coupling == CouplingKind::Rotation) {
        c = 0.5 * (m(0, 0) + m(1, 1));
        s = 0.5 * (m(0, 1) - m(1, 0));
    } else {
        c = 0.5 * (m(0, 0) - m(1, 1));
        s = 0.5 * (m(0, 1) + m(1, 0));
    }

    const double k = std::hypot(c, s);
    const double k_max = std::sqrt(out.p1 * out.p2);
    if (k > k_max) {
        out.rho = 1.0;
        out.clipped = true;
    } else {
        out.rho = k / k_max;
    }
    out.phi = out.rho > 0.0 ? canonical_phase(std::atan2(s, c)) : 0.0;
    out.residual = fit_residual(out.as_params(coupling), s_hat);
    return out;
}

double fit_residual(const QtmsCovariance& params, const Matrix4& s_hat) {
    return (build_covariance(params) - s_hat).norm();
}

void require_fluctuating_channels(const SampleBlock& block) {
    if (block.size() < 2) throw InvalidArgument("need at least 2 samples");
    static constexpr const char* kNames[4] = {"I1", "Q1", "I2", "Q2"};
    for (int c = 0; c < 4; ++c) {
        const auto col = block.channels.col(c);
        const double lo = col.minCoeff();
        const double hi = col.maxCoeff();
        if (lo == hi) {
            throw DegenerateInput(std::string("channel ") + kNames[c] +
                                  " is constant (zero variance)");
        }
    }
}

Detection detect(const SampleBlock& block, double threshold, CouplingKind coupling,
                 CovarianceEstimator estimator) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("detection threshold must lie in [0, 1]");
    }
    const FitResult f = fit(sample_covariance(block, estimator), coupling);
    return {f.rho > threshold, f.rho};
}

} // namespace noisecorr
