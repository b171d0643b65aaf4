// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/monte_carlo.hpp"

#include "noisecorr/error.hpp"
#include "noisecorr/estimator.hpp"
#include "noisecorr/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

namespace noisecorr {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, Hypothesis h, std::uint64_t trial) noexcept {
    return mix_seed(base_seed ^ (2 * trial + static_cast<std::uint64_t>(h)));
}

void TrialConfig::validate() const {
    if (n_samples < 2) throw InvalidArgument("n_samples must be at least 2");
    if (trials_h0 < 1 || trials_h1 < 1) throw InvalidArgument("trial counts must be at least 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("H1 rho must lie in [0, 1)");
    if (!std::isfinite(phi)) throw InvalidArgument("phi must be finite");
}

std::size_t threshold_index(std::size_t n, double p_fa) {
    if (n == 0) throw InvalidArgument("no H0 statistics");
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw InvalidArgument("p_fa must lie strictly inside (0, 1)");
    const double position = static_cast<double>(n - 1) * (1.0 - p_fa);
    // Guard against positions like 89999.00000000001 caused by rounding.
    const double snapped = std::nearbyint(position);
    const double index = std::abs(position - snapped) < 1e-9 ? snapped : std::ceil(position);
    return std::min(static_cast<std::size_t>(index), n - 1);
}

double empirical_threshold(std::span<const double> sorted_h0, double p_fa) {
    return sorted_h0[threshold_index(sorted_h0.size(), p_fa)];
}

RocCurve empirical_curve(std::span<const double> sorted_h0, std::span<const double> sorted_h1,
                         std::span<const double> p_fa_grid) {
    if (sorted_h0.empty() || sorted_h1.empty()) throw InvalidArgument("empty trial statistics");
    validate_pfa_grid(p_fa_grid);

    RocCurve curve;
    curve.model = RocModel::Empirical;
    const double resolution = 1.0 / static_cast<double>(sorted_h0.size());
    if (p_fa_grid.front() < resolution) {
        curve.warnings.push_back("p_fa grid reaches " + std::to_string(p_fa_grid.front()) +
                                 ", finer than the H0 quantile resolution 1/" +
                                 std::to_string(sorted_h0.size()));
    }
    const double n1 = static_cast<double>(sorted_h1.size());
    for (double p : p_fa_grid) {
        const double threshold = empirical_threshold(sorted_h0, p);
        const auto above = sorted_h1.end() - std::upper_bound(sorted_h1.begin(), sorted_h1.end(), threshold);
        curve.points.push_back({p, static_cast<double>(above) / n1});
    }
    return curve;
}

namespace {

double run_one(const TrialConfig& config, Hypothesis h, std::size_t trial) {
    const std::uint64_t seed = trial_seed(config.base_seed, h, trial);
    double phi = config.phi;
    if (config.randomize_phase) {
        // Top 53 bits of an independent mix give a uniform in [0, 1).
        const double u = static_cast<double>(mix_seed(seed ^ 0x5bd1e9955bd1e995ULL) >> 11) * 0x1.0p-53;
        phi = 2.0 * std::numbers::pi * u;
    }
    const double rho = h == Hypothesis::H0 ? 0.0 : config.rho;
    const QtmsCovariance params(1.0, 1.0, rho, phi, config.coupling);
    const SampleBlock block = synthesize(params, config.n_samples, seed);
    return fit(sample_covariance(block), config.coupling).rho;
}

} // namespace

EmpiricalRoc run_trials(const TrialConfig& config, std::span<const double> p_fa_grid, unsigned workers) {
    config.validate();
    validate_pfa_grid(p_fa_grid);

    EmpiricalRoc out;
    out.config = config;
    out.h0_stats.assign(config.trials_h0, 0.0);
    out.h1_stats.assign(config.trials_h1, 0.0);

    const std::size_t total = config.trials_h0 + config.trials_h1;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

    // Work is handed out in fixed-size chunks; each slot is written by exactly
    // one trial, so the schedule cannot affect the output.
    constexpr std::size_t kChunk = 256;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string first_error;
    std::size_t first_error_index = total;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= total) return;
            const std::size_t end = std::min(total, begin + kChunk);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    if (i < config.trials_h0) {
                        out.h0_stats[i] = run_one(config, Hypothesis::H0, i);
                    } else {
                        const std::size_t j = i - config.trials_h0;
                        out.h1_stats[j] = run_one(config, Hypothesis::H1, j);
                    }
                } catch (const std::exception& e) {
                    std::lock_guard lock(error_mutex);
                    if (i < first_error_index) {
                        first_error_index = i;
                        first_error = e.what();
                    }
                    failed = true;
                    return;
                }
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    if (failed) {
        const bool h0 = first_error_index < config.trials_h0;
        const std::size_t idx = h0 ? first_error_index : first_error_index - config.trials_h0;
        throw DegenerateInput(std::string("trial ") + (h0 ? "H0#" : "H1#") + std::to_string(idx) +
                              " failed: " + first_error);
    }

    std::sort(out.h0_stats.begin(), out.h0_stats.end());
    std::sort(out.h1_stats.begin(), out.h1_stats.end());
    out.curve = empirical_curve(out.h0_stats, out.h1_stats, p_fa_grid);
    out.curve.strength = config.rho;
    out.curve.n = config.n_samples;
    return out;
}

std::pair<double, double> wilson_interval(double p_hat, std::size_t trials, double z) {
    const double n = static_cast<double>(trials);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TheoryComparison compare_to_theory(const EmpiricalRoc& emp) {
    TheoryComparison report;
    const std::size_t n = emp.config.n_samples;
    if (n < kNoiseRadarMinValidN) {
        report.warnings.push_back("n_samples = " + std::to_string(n) +
                                  " is below 100; the closed-form ROC is outside its validity region");
    }
    report.warnings.insert(report.warnings.end(), emp.curve.warnings.begin(), emp.curve.warnings.end());

    for (const RocPoint& pt : emp.curve.points) {
        ComparisonPoint cp;
        cp.p_fa = pt.p_fa;
        cp.p_d_empirical = pt.p_d;
        cp.p_d_theory = noise_radar_pd(pt.p_fa, emp.config.rho, n);
        cp.gap = std::abs(cp.p_d_empirical - cp.p_d_theory);
        std::tie(cp.ci_low, cp.ci_high) = wilson_interval(pt.p_d, emp.h1_stats.size());
        cp.theory_in_ci = cp.p_d_theory >= cp.ci_low && cp.p_d_theory <= cp.ci_high;
        report.max_abs_gap = std::max(report.max_abs_gap, cp.gap);
        report.points.push_back(cp);
    }
    return report;
}

} // namespace noisecorr
