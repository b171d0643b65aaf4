// SPDX-License-Identifier: Apache-2.0
//
// Link budget and the range law of the correlation coefficient.
//
// With kappa(R) = G * Ae * sigma / ((4 pi)^2 R^4) the received and
// received-noise powers are
//
//     P1  = kappa * P2  + Pn
//     Pn1 = kappa * Pn2 + Pn
//
// and substituting into rho = sqrt((1 - Pn1/P1)(1 - Pn2/P2)) gives
//
//     rho(R) = rho0 / sqrt(1 + (R / Rc)^4),
//     Rc     = (G * Ae * sigma * P2 / ((4 pi)^2 * Pn))^(1/4),
//
// where Rc is the range at which single-pulse SNR = (Rc / R)^4 equals one.
#pragma once

#include <cmath>

namespace noisecorr {

// dB / dBm conversions, used only where configs enter the library.
inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) noexcept { return 10.0 * std::log10(watts) + 30.0; }

/// Radar and target parameters in linear SI units.
struct LinkBudget {
    double gain = 1.0;           ///< transmit antenna gain G
    double effective_area = 1.0; ///< receive antenna effective area Ae [m^2]
    double rcs = 1.0;            ///< target radar cross section sigma [m^2]
    double tx_power = 1.0;       ///< transmit / reference power P2 [W]
    double noise_power = 1.0;    ///< external noise at the receiver Pn [W]
    double rho0 = 1.0;           ///< system-limited correlation ceiling

    /// Throws InvalidArgument unless all quantities are positive and
    /// 0 < rho0 <= 1.
    void validate() const;
};

/// The pair (rho0, Rc) that fixes rho(R).
class RangeProfile {
public:
    RangeProfile(double rho0, double characteristic_range);

    /// rho0 taken from the budget, Rc evaluated from it.
    static RangeProfile from_budget(const LinkBudget& budget);
    /// rho0 = 1 - pn2/P2 from the reference-channel noise, Rc from the budget.
    static RangeProfile from_reference_noise(const LinkBudget& budget, double pn2);

    double rho0() const noexcept { return rho0_; }
    double characteristic_range() const noexcept { return rc_; }

private:
    double rho0_;
    double rc_;
};

/// Rc in metres, using the (4 pi)^2 denominator.
double characteristic_range(const LinkBudget& budget);

/// Rc evaluated with a single 4 pi in the denominator. Not part of the model;
/// reported alongside the canonical value because published example figures
/// for this link budget match this variant.
double characteristic_range_single_4pi(const LinkBudget& budget);

/// Two-way propagation factor kappa(R) = G Ae sigma / ((4 pi)^2 R^4).
double propagation_factor(const LinkBudget& budget, double range);

struct ReceivedPowers {
    double p1 = 0.0;  ///< total received power
    double pn1 = 0.0; ///< uncorrelated part of the received power
};

/// Received total and noise powers at `range` (> 0) given reference-channel
/// noise pn2.
ReceivedPowers received_powers(const LinkBudget& budget, double pn2, double range);

/// rho0 / sqrt(1 + (R / Rc)^4). Requires range >= 0.
double rho_at_range(const RangeProfile& profile, double range);

/// Single-pulse SNR (Rc / R)^4. Requires range > 0.
double snr_at_range(const RangeProfile& profile, double range);

/// rho at `range` evaluated through the full power chain (received_powers
/// then rho_from_totals), independently of the closed-form range law.
/// Requires 0 <= pn2 < P2.
double rho_range_consistency(const LinkBudget& budget, double pn2, double range);

} // namespace noisecorr
