// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/detection.hpp"

#include "noisecorr/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace noisecorr {

namespace {

// With Z a standard bivariate normal, Q1(a, b) = P(|a e + Z| > b). The
// triangle inequality bounds Q1 <= exp(-(b - a)^2 / 2) for b > a and
// 1 - Q1 <= exp(-(a - b)^2 / 2) for a > b, so beyond this gap the answer is
// 0 or 1 to within 3e-18.
constexpr double kSaturationGap = 9.0;

// Half-width of the Poisson window, in standard deviations plus a floor.
constexpr double kWindowSigmas = 10.0;
constexpr double kWindowFloor = 12.0;

double log_poisson(double k, double mean, double log_mean) {
    return -mean + k * log_mean - std::lgamma(k + 1.0);
}

// Noncentral chi-square mixture with two degrees of freedom:
//   Q1(a, b) = sum_k Pois(k; a^2/2) P(Pois(b^2/2) <= k).
// With complement = true, returns 1 - Q1 via P(Pois(b^2/2) > k) instead.
double poisson_mixture(double a, double b, bool complement) {
    const double lambda = 0.5 * a * a;
    const double y = 0.5 * b * b;
    const double log_lambda = std::log(lambda);
    const double log_y = std::log(y);

    const double spread = kWindowSigmas * std::sqrt(lambda) + kWindowFloor;
    const double k_lo = std::max(0.0, std::floor(lambda - spread));
    const double k_hi = std::ceil(lambda + spread);

    // Regularized incomplete gamma of integer shape k+1 is a Poisson CDF:
    // Q(k+1, y) = P(Pois(y) <= k).
    double cdf = boost::math::gamma_q(k_lo + 1.0, y);
    double tail = boost::math::gamma_p(k_lo + 1.0, y);

    double sum = 0.0;
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        const double weight = std::exp(log_poisson(k, lambda, log_lambda));
        sum += weight * (complement ? tail : cdf);
        const double step = std::exp(log_poisson(k + 1.0, y, log_y));
        cdf += step;
        tail = std::max(0.0, tail - step);
    }
    return std::clamp(sum, 0.0, 1.0);
}

// 1 - Q1 = sum_k Pois(k; a^2/2) P(Pois(b^2/2) > k), summed from the top of the
// weight window downwards so the upper Poisson tail is built by adding
// positive pmf terms. No subtraction, so tiny results keep their precision.
double lower_tail_sum(double a, double b) {
    const double lambda = 0.5 * a * a;
    const double y = 0.5 * b * b;
    const double log_lambda = std::log(lambda);
    const double log_y = std::log(y);

    const double k_top = std::ceil(lambda + kWindowSigmas * std::sqrt(lambda) + kWindowFloor);
    double tail = boost::math::gamma_p(k_top + 1.0, y); // P(Pois(y) > k_top)
    double sum = 0.0;
    for (double k = k_top; k >= 0.0; k -= 1.0) {
        sum += std::exp(log_poisson(k, lambda, log_lambda)) * tail;
        tail += std::exp(log_poisson(k, y, log_y)); // now P(Pois(y) > k - 1)
    }
    return std::min(sum, 1.0);
}

void require_pfa(double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw InvalidArgument("p_fa must lie strictly inside (0, 1)");
}

void require_n(std::size_t n) {
    if (n < 1) throw InvalidArgument("integration count n must be at least 1");
}

} // namespace

double marcum_q1(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        throw InvalidArgument("marcum_q1 arguments must be finite and non-negative");
    }
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    if (b - a > kSaturationGap) return 0.0;
    if (a - b > kSaturationGap) return 1.0;
    // Sum whichever of Q1 and 1 - Q1 is the smaller quantity.
    if (b >= a) return poisson_mixture(a, b, false);
    return 1.0 - poisson_mixture(a, b, true);
}

double marcum_q1_complement(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        throw InvalidArgument("marcum_q1_complement arguments must be finite and non-negative");
    }
    if (b == 0.0) return 0.0;
    if (a == 0.0) return -std::expm1(-0.5 * b * b);
    // For a <= b, Q1 is at most about one half and 1 - Q1 loses nothing.
    if (a <= b) return 1.0 - marcum_q1(a, b);
    // exp(-(a - b)^2 / 2) below the smallest normal double.
    if (a - b > 38.0) return 0.0;
    return lower_tail_sum(a, b);
}

namespace {

struct MarcumArgs {
    double a;
    double b;
};

MarcumArgs noise_radar_args(double p_fa, double rho, std::size_t n) {
    require_pfa(p_fa);
    require_n(n);
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw InvalidArgument("rho must lie in [0, 1); rho = 1 is singular");
    }
    const double shrink = 1.0 - rho * rho;
    return {rho * std::sqrt(2.0 * static_cast<double>(n)) / shrink, std::sqrt(-2.0 * std::log(p_fa)) / shrink};
}

MarcumArgs conventional_args(double p_fa, double snr, std::size_t n) {
    require_pfa(p_fa);
    require_n(n);
    if (!(snr >= 0.0) || !std::isfinite(snr)) throw InvalidArgument("snr must be finite and non-negative");
    return {std::sqrt(2.0 * static_cast<double>(n) * snr), std::sqrt(-2.0 * std::log(p_fa))};
}

} // namespace

double noise_radar_pd(double p_fa, double rho, std::size_t n) {
    const auto [a, b] = noise_radar_args(p_fa, rho, n);
    return marcum_q1(a, b);
}

double conventional_pd(double p_fa, double snr, std::size_t n) {
    const auto [a, b] = conventional_args(p_fa, snr, n);
    return marcum_q1(a, b);
}

double noise_radar_pmiss(double p_fa, double rho, std::size_t n) {
    const auto [a, b] = noise_radar_args(p_fa, rho, n);
    return marcum_q1_complement(a, b);
}

double conventional_pmiss(double p_fa, double snr, std::size_t n) {
    const auto [a, b] = conventional_args(p_fa, snr, n);
    return marcum_q1_complement(a, b);
}

std::string_view to_string(RocModel model) noexcept {
    switch (model) {
    case RocModel::NoiseRadar: return "noise";
    case RocModel::Conventional: return "conventional";
    case RocModel::Empirical: return "empirical";
    }
    return "unknown";
}

RocModel parse_roc_model(std::string_view text) {
    if (text == "noise") return RocModel::NoiseRadar;
    if (text == "conventional") return RocModel::Conventional;
    if (text == "empirical") return RocModel::Empirical;
    throw InvalidArgument("unknown ROC model '" + std::string(text) + "'");
}

void validate_pfa_grid(std::span<const double> grid) {
    if (grid.empty()) throw InvalidArgument("p_fa grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
            throw InvalidArgument("p_fa grid values must lie strictly inside (0, 1)");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument("p_fa grid must be strictly increasing");
        }
    }
}

std::vector<double> default_pfa_grid() {
    std::vector<double> grid = parse_pfa_grid("1e-4:0.5:50:log");
    constexpr int kLinear = 25;
    constexpr double kTop = 1.0 - 1e-3;
    for (int i = 1; i <= kLinear; ++i) {
        grid.push_back(0.5 + (kTop - 0.5) * i / kLinear);
    }
    return grid;
}

std::vector<double> parse_pfa_grid(std::string_view spec) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const auto bad = [&](const std::string& why) {
        return InvalidArgument("bad p_fa grid '" + std::string(spec) + "': " + why +
                               " (expected min:max:steps:log|lin)");
    };
    if (parts.size() != 4) throw bad("wrong number of fields");

    const auto parse_number = [&](std::string_view text) {
        double v = 0.0;
        const auto [end, err] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (err != std::errc() || end != text.data() + text.size()) {
            throw bad("not a number: '" + std::string(text) + "'");
        }
        return v;
    };
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    long steps = 0;
    const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), steps);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || steps < 1) {
        throw bad("steps must be a positive integer");
    }
    const bool log_spacing = parts[3] == "log";
    if (!log_spacing && parts[3] != "lin") throw bad("spacing must be log or lin");

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps));
    if (steps == 1) {
        grid.push_back(lo);
    } else {
        for (long i = 0; i < steps; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
            grid.push_back(log_spacing ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        grid.back() = hi;
    }
    validate_pfa_grid(grid);
    return grid;
}

RocCurve roc_curve(RocModel model, double strength, std::size_t n, std::span<const double> p_fa_grid) {
    validate_pfa_grid(p_fa_grid);
    require_n(n);

    RocCurve curve;
    curve.model = model;
    curve.strength = strength;
    curve.n = n;
    curve.points.reserve(p_fa_grid.size());

    switch (model) {
    case RocModel::NoiseRadar:
        if (n < kNoiseRadarMinValidN) {
            curve.warnings.push_back("n = " + std::to_string(n) +
                                     " is below 100; the noise-radar ROC approximation may be inaccurate");
        }
        for (double p : p_fa_grid) curve.points.push_back({p, noise_radar_pd(p, strength, n)});
        break;
    case RocModel::Conventional:
        for (double p : p_fa_grid) curve.points.push_back({p, conventional_pd(p, strength, n)});
        break;
    case RocModel::Empirical:
        throw InvalidArgument("empirical curves come from Monte Carlo trials, not a closed form");
    }
    return curve;
}

std::vector<RocCurve> roc_vs_range(const RangeProfile& profile, std::span<const double> ranges,
                                   std::size_t n, std::span<const double> p_fa_grid) {
    std::vector<RocCurve> curves;
    curves.reserve(ranges.size());
    for (double range : ranges) {
        RocCurve curve = roc_curve(RocModel::NoiseRadar, rho_at_range(profile, range), n, p_fa_grid);
        curve.range = range;
        curves.push_back(std::move(curve));
    }
    return curves;
}

} // namespace noisecorr
