// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo validation of the rho-hat detector.
//
// Each trial synthesizes N samples under H0 (rho = 0) or H1 (rho = config
// rho), fits the structured covariance and records rho-hat. Empirical ROC
// points come from thresholding at H0 quantiles.
//
// Seed rule: trial i of hypothesis h (0 for H0, 1 for H1) uses
//     seed = splitmix64(base_seed XOR (2 * i + h))
// so every trial has its own stream and the result is independent of how
// trials are scheduled across workers.
#pragma once

#include "noisecorr/covariance.hpp"
#include "noisecorr/detection.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace noisecorr {

enum class Hypothesis : std::uint64_t { H0 = 0, H1 = 1 };

/// splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

std::uint64_t trial_seed(std::uint64_t base_seed, Hypothesis h, std::uint64_t trial) noexcept;

struct TrialConfig {
    std::size_t n_samples = 150;
    double rho = 0.0;
    double phi = 0.0;
    CouplingKind coupling = CouplingKind::Rotation;
    std::size_t trials_h0 = 1000;
    std::size_t trials_h1 = 1000;
    std::uint64_t base_seed = 0;
    /// Draw phi uniformly per trial instead of holding it fixed.
    bool randomize_phase = false;

    void validate() const;
};

struct EmpiricalRoc {
    TrialConfig config;
    std::vector<double> h0_stats; ///< sorted ascending
    std::vector<double> h1_stats; ///< sorted ascending
    RocCurve curve;
};

/// Index into the sorted H0 statistics used as the threshold for `p_fa`:
/// ceil((n - 1) * (1 - p_fa)), i.e. the "higher" quantile rule.
std::size_t threshold_index(std::size_t n, double p_fa);

/// Empirical (1 - p_fa) quantile of sorted H0 statistics.
double empirical_threshold(std::span<const double> sorted_h0, double p_fa);

/// p_d at each grid p_fa: fraction of H1 statistics strictly above the H0
/// threshold. Inputs must be sorted ascending.
RocCurve empirical_curve(std::span<const double> sorted_h0, std::span<const double> sorted_h1,
                         std::span<const double> p_fa_grid);

/// Runs all trials. workers == 0 uses the hardware concurrency. The result
/// does not depend on the worker count.
EmpiricalRoc run_trials(const TrialConfig& config, std::span<const double> p_fa_grid,
                        unsigned workers = 0);

struct ComparisonPoint {
    double p_fa = 0.0;
    double p_d_empirical = 0.0;
    double p_d_theory = 0.0;
    double gap = 0.0;          ///< |empirical - theory|
    double ci_low = 0.0;       ///< 99% Wilson interval for the empirical p_d
    double ci_high = 0.0;
    bool theory_in_ci = false;

    double ci_half_width() const noexcept { return 0.5 * (ci_high - ci_low); }
};

struct TheoryComparison {
    std::vector<ComparisonPoint> points;
    double max_abs_gap = 0.0;
    std::vector<std::string> warnings;
};

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

/// 99% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(double p_hat, std::size_t trials, double z = kZ99);

/// Evaluates the noise-radar ROC at the empirical curve's grid with the
/// config's (rho, n_samples) and reports pointwise gaps.
TheoryComparison compare_to_theory(const EmpiricalRoc& emp);

} // namespace noisecorr
