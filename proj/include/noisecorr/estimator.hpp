// SPDX-License-Identifier: Apache-2.0
//
// Correlation-coefficient estimation: least-squares fit of the structured
// covariance to a sample covariance under the Frobenius norm,
//
//     min  || R(P1, P2, rho, phi) - S ||_F
//     s.t. P1, P2 >= 0,  0 <= rho <= 1,  0 <= phi < 2*pi.
//
// The objective separates into the two diagonal blocks, which fix P1 and P2
// as half-traces, and the cross-block, where the best scaled rotation (or
// reflection) k*C(phi) is a projection onto a two-dimensional subspace.
// rho = k / sqrt(P1*P2) is then clipped to 1. Below the clip the result is
// the exact global minimizer.
#pragma once

#include "noisecorr/covariance.hpp"
#include "noisecorr/synthesis.hpp"

namespace noisecorr {

struct FitResult {
    double p1 = 0.0;
    double p2 = 0.0;
    double rho = 0.0;
    double phi = 0.0;
    /// Frobenius norm of R(fit) - S.
    double residual = 0.0;
    /// The unconstrained cross-block magnitude exceeded sqrt(P1*P2) and rho
    /// was clipped to 1; (P1, P2) keep their decoupled values.
    bool clipped = false;

    QtmsCovariance as_params(CouplingKind coupling) const {
        return QtmsCovariance(p1, p2, rho, phi, coupling);
    }
};

/// Relative asymmetry accepted by fit().
inline constexpr double kSymmetryTolerance = 1e-9;

/// Closed-form constrained fit. Throws InvalidArgument for non-finite or
/// asymmetric input and DegenerateInput when either channel pair has zero
/// power. When rho-hat is zero the phase is unidentifiable and 0 is reported.
FitResult fit(const Matrix4& s_hat, CouplingKind coupling);

/// Frobenius distance between the model at `params` and `s_hat`.
double fit_residual(const QtmsCovariance& params, const Matrix4& s_hat);

struct Detection {
    bool detected = false;
    double rho_hat = 0.0;
};

/// Rejects blocks in which some channel carries no fluctuation (zero sample
/// variance about its mean); a constant voltage is not a noise record.
void require_fluctuating_channels(const SampleBlock& block);

/// Fits the block's sample covariance and compares rho-hat to `threshold`
/// (detection iff rho_hat > threshold).
Detection detect(const SampleBlock& block, double threshold, CouplingKind coupling,
                 CovarianceEstimator estimator = CovarianceEstimator::KnownZeroMean);

} // namespace noisecorr
