// SPDX-License-Identifier: Apache-2.0
//
// Four-channel covariance model of a coherent noise radar.
//
// The voltage vector is x = [I1, Q1, I2, Q2]^T where (I1, Q1) is the received
// signal and (I2, Q2) the retained reference. Its covariance is
//
//     | P1*1_2        K     |
//     |   K^T       P2*1_2  |,    K = rho * sqrt(P1*P2) * C(phi)
//
// with C(phi) either the rotation [[cos, sin], [-sin, cos]] (reference is a
// direct copy of the transmit signal) or the reflection [[cos, sin],
// [sin, -cos]] (transmit and reference are opposite sidebands of one noise
// source).
#pragma once

#include <Eigen/Core>

#include <string_view>

namespace noisecorr {

using Matrix4 = Eigen::Matrix4d;
using Matrix2 = Eigen::Matrix2d;

enum class CouplingKind { Rotation, Reflection };

std::string_view to_string(CouplingKind kind) noexcept;
/// Accepts "rotation" / "reflection" (case-insensitive).
CouplingKind parse_coupling(std::string_view text);

/// Wraps an angle into [0, 2*pi).
double canonical_phase(double phi) noexcept;

/// Parameters (P1, P2, rho, phi, coupling) of the structured covariance.
/// Validated on construction; phi is stored modulo 2*pi.
class QtmsCovariance {
public:
    QtmsCovariance(double p1, double p2, double rho, double phi,
                   CouplingKind coupling = CouplingKind::Rotation);

    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    double rho() const noexcept { return rho_; }
    double phi() const noexcept { return phi_; }
    CouplingKind coupling() const noexcept { return coupling_; }

    /// rho * sqrt(P1 * P2), the magnitude of the cross-block.
    double cross_magnitude() const noexcept;

    bool operator==(const QtmsCovariance&) const = default;

private:
    double p1_;
    double p2_;
    double rho_;
    double phi_;
    CouplingKind coupling_;
};

/// The 2x2 coupling matrix C(phi) for the given kind.
Matrix2 coupling_matrix(CouplingKind kind, double phi) noexcept;

/// Realizes the 4x4 covariance. Exactly symmetric; singular when rho == 1.
Matrix4 build_covariance(const QtmsCovariance& params);

/// Split of each signal into a common (perfectly correlated) part of power p
/// and independent noise of powers pn1 (received) and pn2 (reference).
struct SignalDecomposition {
    double p = 0.0;
    double pn1 = 0.0;
    double pn2 = 0.0;

    double total_received() const noexcept { return p + pn1; }
    double total_reference() const noexcept { return p + pn2; }
};

/// rho = [(1 + pn1/p)(1 + pn2/p)]^(-1/2).
///
/// p == 0 with any noise present returns the limit value 0; p == 0 with no
/// noise at all is indeterminate and throws DegenerateInput.
double rho_from_decomposition(const SignalDecomposition& d);

/// rho = sqrt((1 - pn1/p1)(1 - pn2/p2)), the same quantity expressed through
/// total powers. Requires 0 <= pn1 <= p1, 0 <= pn2 <= p2 and p1, p2 > 0.
double rho_from_totals(double p1, double p2, double pn1, double pn2);

/// Noise-free-channel ceiling rho0 = 1 - pn2/p2.
double rho0_from_reference(double p2, double pn2);

} // namespace noisecorr
