// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/covariance.hpp"

#include "noisecorr/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace noisecorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be finite");
    }
}

} // namespace

std::string_view to_string(CouplingKind kind) noexcept {
    return kind == CouplingKind::Rotation ? "rotation" : "reflection";
}

CouplingKind parse_coupling(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "rotation") return CouplingKind::Rotation;
    if (lower == "reflection") return CouplingKind::Reflection;
    throw InvalidArgument("unknown coupling '" + std::string(text) +
                          "' (expected rotation or reflection)");
}

double canonical_phase(double phi) noexcept {
    double wrapped = std::fmod(phi, kTwoPi);
    if (wrapped < 0.0) wrapped += kTwoPi;
    // fmod of a tiny negative angle can round up to exactly 2*pi.
    if (wrapped >= kTwoPi) wrapped = 0.0;
    return wrapped;
}

QtmsCovariance::QtmsCovariance(double p1, double p2, double rho, double phi,
                               CouplingKind coupling)
    : p1_(p1), p2_(p2), rho_(rho), phi_(0.0), coupling_(coupling) {
    require_finite(p1, "p1");
    require_finite(p2, "p2");
    require_finite(rho, "rho");
    require_finite(phi, "phi");
    if (p1 <= 0.0 || p2 <= 0.0) {
        throw InvalidArgument("signal powers p1 and p2 must be positive");
    }
    if (rho < 0.0 || rho > 1.0) {
        throw InvalidArgument("rho must lie in [0, 1]");
    }
    phi_ = canonical_phase(phi);
}

double QtmsCovariance::cross_magnitude() const noexcept {
    return rho_ * std::sqrt(p1_ * p2_);
}

Matrix2 coupling_matrix(CouplingKind kind, double phi) noexcept {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Matrix2 m;
    if (kind == CouplingKind::Rotation) {
        m << c, s, -s, c;
    } else {
        m << c, s, s, -c;
    }
    return m;
}

Matrix4 build_covariance(const QtmsCovariance& params) {
    const Matrix2 cross = params.cross_magnitude() * coupling_matrix(params.coupling(), params.phi());

    Matrix4 r = Matrix4::Zero();
    r(0, 0) = r(1, 1) = params.p1();
    r(2, 2) = r(3, 3) = params.p2();
    r.block<2, 2>(0, 2) = cross;
    r.block<2, 2>(2, 0) = cross.transpose();
    return r;
}

double rho_from_decomposition(const SignalDecomposition& d) {
    require_finite(d.p, "p");
    require_finite(d.pn1, "pn1");
    require_finite(d.pn2, "pn2");
    if (d.p < 0.0 || d.pn1 < 0.0 || d.pn2 < 0.0) {
        throw InvalidArgument("decomposition powers must be non-negative");
    }
    if (d.p == 0.0) {
        if (d.pn1 == 0.0 && d.pn2 == 0.0) {
            throw DegenerateInput("rho is indeterminate when all powers are zero");
        }
        return 0.0;
    }
    return 1.0 / std::sqrt((1.0 + d.pn1 / d.p) * (1.0 + d.pn2 / d.p));
}

double rho_from_totals(double p1, double p2, double pn1, double pn2) {
    require_finite(p1, "p1");
    require_finite(p2, "p2");
    require_finite(pn1, "pn1");
    require_finite(pn2, "pn2");
    if (p1 <= 0.0 || p2 <= 0.0) {
        throw InvalidArgument("total powers p1 and p2 must be positive");
    }
    if (pn1 < 0.0 || pn2 < 0.0) {
        throw InvalidArgument("noise powers must be non-negative");
    }
    if (pn1 > p1 || pn2 > p2) {
        throw InvalidArgument("noise power exceeds total power; no valid decomposition");
    }
    // (p - pn)/p rather than 1 - pn/p keeps relative accuracy when the
    // correlated part is small.
    return std::sqrt(((p1 - pn1) / p1) * ((p2 - pn2) / p2));
}

double rho0_from_reference(double p2, double pn2) {
    require_finite(p2, "p2");
    require_finite(pn2, "pn2");
    if (p2 <= 0.0) throw InvalidArgument("reference power p2 must be positive");
    if (pn2 < 0.0 || pn2 > p2) {
        throw InvalidArgument("reference noise pn2 must lie in [0, p2]");
    }
    return (p2 - pn2) / p2;
}

} // namespace noisecorr
