// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/range_model.hpp"

#include "noisecorr/covariance.hpp"
#include "noisecorr/error.hpp"

#include <numbers>
#include <string>

namespace noisecorr {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_positive(double value, const char* name) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw InvalidArgument(std::string(name) + " must be positive and finite");
    }
}

double signal_to_noise_factor(const LinkBudget& budget) {
    budget.validate();
    return budget.gain * budget.effective_area * budget.rcs * budget.tx_power / budget.noise_power;
}

} // namespace

void LinkBudget::validate() const {
    require_positive(gain, "gain");
    require_positive(effective_area, "effective_area");
    require_positive(rcs, "rcs");
    require_positive(tx_power, "tx_power");
    require_positive(noise_power, "noise_power");
    if (!(rho0 > 0.0 && rho0 <= 1.0)) throw InvalidArgument("rho0 must lie in (0, 1]");
}

RangeProfile::RangeProfile(double rho0, double characteristic_range)
    : rho0_(rho0), rc_(characteristic_range) {
    if (!(rho0 > 0.0 && rho0 <= 1.0)) throw InvalidArgument("rho0 must lie in (0, 1]");
    require_positive(characteristic_range, "characteristic range");
}

RangeProfile RangeProfile::from_budget(const LinkBudget& budget) {
    return RangeProfile(budget.rho0, noisecorr::characteristic_range(budget));
}

RangeProfile RangeProfile::from_reference_noise(const LinkBudget& budget, double pn2) {
    return RangeProfile(rho0_from_reference(budget.tx_power, pn2), noisecorr::characteristic_range(budget));
}

double characteristic_range(const LinkBudget& budget) {
    return std::pow(signal_to_noise_factor(budget) / (kFourPi * kFourPi), 0.25);
}

double characteristic_range_single_4pi(const LinkBudget& budget) {
    return std::pow(signal_to_noise_factor(budget) / kFourPi, 0.25);
}

double propagation_factor(const LinkBudget& budget, double range) {
    budget.validate();
    require_positive(range, "range");
    const double r2 = range * range;
    return budget.gain * budget.effective_area * budget.rcs / (kFourPi * kFourPi * r2 * r2);
}

ReceivedPowers received_powers(const LinkBudget& budget, double pn2, double range) {
    if (!(pn2 >= 0.0) || !std::isfinite(pn2)) {
        throw InvalidArgument("reference noise power pn2 must be non-negative");
    }
    const double kappa = propagation_factor(budget, range);
    return {kappa * budget.tx_power + budget.noise_power, kappa * pn2 + budget.noise_power};
}

double rho_at_range(const RangeProfile& profile, double range) {
    if (!(range >= 0.0)) throw InvalidArgument("range must be non-negative");
    const double x = range / profile.characteristic_range();
    const double x2 = x * x;
    return profile.rho0() / std::sqrt(1.0 + x2 * x2);
}

double snr_at_range(const RangeProfile& profile, double range) {
    require_positive(range, "range");
    const double x = profile.characteristic_range() / range;
    const double x2 = x * x;
    return x2 * x2;
}

double rho_range_consistency(const LinkBudget& budget, double pn2, double range) {
    if (!(pn2 >= 0.0 && pn2 < budget.tx_power)) {
        throw InvalidArgument("reference noise power pn2 must lie in [0, P2)");
    }
    const ReceivedPowers rx = received_powers(budget, pn2, range);
    return rho_from_totals(rx.p1, budget.tx_power, rx.pn1, pn2);
}

} // namespace noisecorr
