// SPDX-License-Identifier: Apache-2.0
//
// Closed-form ROC curves.
//
//   noise radar (rho-hat detector, large N):
//     pD = Q1( rho sqrt(2N) / (1 - rho^2),  sqrt(-2 ln pFA) / (1 - rho^2) )
//   conventional radar, perfect coherent integration:
//     pD = Q1( sqrt(2 N SNR),  sqrt(-2 ln pFA) )
//
// The noise-radar expression is an approximation that is only trusted for
// N of roughly 100 or more; smaller N is accepted with a warning.
#pragma once

#include "noisecorr/range_model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace noisecorr {

/// First-order Marcum Q function
///     Q1(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I0(a x) dx,   a, b >= 0.
/// Absolute error below 1e-10.
double marcum_q1(double a, double b);

/// 1 - Q1(a, b) with full relative precision, including values far below
/// the double spacing near 1 (down to the smallest normal double).
double marcum_q1_complement(double a, double b);

/// Sample count below which the noise-radar ROC is outside its validity region.
inline constexpr std::size_t kNoiseRadarMinValidN = 100;

/// Requires 0 < p_fa < 1, 0 <= rho < 1, n >= 1.
double noise_radar_pd(double p_fa, double rho, std::size_t n);

/// Requires 0 < p_fa < 1, snr >= 0, n >= 1.
double conventional_pd(double p_fa, double snr, std::size_t n);

/// Miss probabilities 1 - p_d, accurate where p_d itself rounds to 1.
double noise_radar_pmiss(double p_fa, double rho, std::size_t n);
double conventional_pmiss(double p_fa, double snr, std::size_t n);

enum class RocModel { NoiseRadar, Conventional, Empirical };

std::string_view to_string(RocModel model) noexcept;
RocModel parse_roc_model(std::string_view text);

struct RocPoint {
    double p_fa = 0.0;
    double p_d = 0.0;
};

struct RocCurve {
    RocModel model = RocModel::NoiseRadar;
    /// rho for NoiseRadar / Empirical curves, SNR for Conventional ones.
    double strength = 0.0;
    std::size_t n = 0;
    std::optional<double> range;
    std::vector<RocPoint> points;
    std::vector<std::string> warnings;
};

/// Checks that a grid is strictly increasing inside (0, 1).
void validate_pfa_grid(std::span<const double> grid);

/// 50 log-spaced points on [1e-4, 0.5] followed by 25 linear points on
/// (0.5, 0.999].
std::vector<double> default_pfa_grid();

/// Parses "min:max:steps:log" or "min:max:steps:lin" (endpoints inclusive).
std::vector<double> parse_pfa_grid(std::string_view spec);

/// Theoretical curve for NoiseRadar (strength = rho) or Conventional
/// (strength = SNR).
RocCurve roc_curve(RocModel model, double strength, std::size_t n, std::span<const double> p_fa_grid);

/// One NoiseRadar curve per range, with rho from the range law.
std::vector<RocCurve> roc_vs_range(const RangeProfile& profile, std::span<const double> ranges,
                                   std::size_t n, std::span<const double> p_fa_grid);

} // namespace noisecorr
