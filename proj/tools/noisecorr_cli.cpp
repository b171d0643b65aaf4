// SPDX-License-Identifier: Apache-2.0
//
// noisecorr: command-line front end.
//
//   rc         characteristic range of a link budget
//   rho-range  rho(R) sweep as CSV
//   roc        theoretical ROC curve (noise radar or conventional)
//   simulate   synthesize a four-channel sample block
//   estimate   fit rho-hat to a sample block
//   mc-roc     Monte Carlo ROC and comparison with theory
//
// Exit codes: 0 success, 2 usage error, 3 config/format error,
// 4 numeric/degenerate input, 5 I/O error, 1 anything else.
#include "noisecorr/detection.hpp"
#include "noisecorr/error.hpp"
#include "noisecorr/estimator.hpp"
#include "noisecorr/io.hpp"
#include "noisecorr/monte_carlo.hpp"
#include "noisecorr/range_model.hpp"
#include "noisecorr/synthesis.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef NOISECORR_VERSION
#define NOISECORR_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
namespace io = noisecorr::io;
using noisecorr::io::json;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kConfig = 3,
    kNumeric = 4,
    kIo = 5,
};

/// Collects what a run needs to be repeated: argv, resolved parameters and
/// the files it produced.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    json parameters = json::object();
    std::vector<std::string> outputs;

    json to_json() const {
        return {{"tool", "noisecorr"},
                {"version", NOISECORR_VERSION},
                {"command", command},
                {"argv", argv},
                {"parameters", parameters},
                {"outputs", outputs}};
    }
};

struct GlobalOptions {
    std::string manifest_path;
};

/// Writes `text` to `out_path` or stdout when empty.
void emit(const std::string& out_path, const std::string& text, RunManifest& manifest) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        io::write_text_file(out_path, text);
        manifest.outputs.push_back(out_path);
    }
}

void write_manifest(const RunManifest& manifest, const GlobalOptions& global, const std::string& out_path) {
    std::string path = global.manifest_path;
    if (path.empty() && !out_path.empty()) path = out_path + ".manifest.json";
    if (path.empty()) return;
    io::write_json_file(path, manifest.to_json());
}

noisecorr::LinkBudget load_budget(const std::string& path) {
    return io::link_budget_from_json(io::read_json_file(path), path);
}

// Example budget that is commonly quoted with Rc = 1.0 km.
bool is_reference_example_budget(const json& cfg) {
    const auto near = [&](const char* key, double v) {
        return cfg.contains(key) && cfg.at(key).is_number() && std::abs(cfg.at(key).get<double>() - v) < 1e-9;
    };
    return near("gain_db", 30.0) && near("effective_area_m2", 0.081) && near("rcs_m2", 1.0) &&
           near("tx_power_dbm", 18.0) && near("noise_power_dbm", -94.0);
}

// rc ---------------------------------------------------------------------------

struct RcArgs {
    std::string config;
    bool as_json = false;
};

void run_rc(const RcArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    const json cfg = io::read_json_file(args.config);
    const noisecorr::LinkBudget budget = io::link_budget_from_json(cfg, args.config);
    const double rc = noisecorr::characteristic_range(budget);
    const double rc_alt = noisecorr::characteristic_range_single_4pi(budget);

    std::optional<std::string> note;
    if (is_reference_example_budget(cfg)) {
        note = "this example budget (30 dB, 0.081 m^2, 1 m^2, 18 dBm, -94 dBm) is commonly quoted with "
               "R_c = 1.0 km; that figure matches a single 4*pi in the denominator (R_c = " +
               io::format_double(rc_alt) + " m), whereas the value above uses (4*pi)^2";
    }

    manifest.parameters = {{"config", args.config}, {"budget", io::link_budget_to_json(budget)}};

    std::ostringstream out;
    if (args.as_json) {
        json j = {{"r_c_m", rc},
                  {"r_c_single_4pi_m", rc_alt},
                  {"rho0", budget.rho0},
                  {"note", note ? json(*note) : json(nullptr)}};
        out << j.dump(2) << '\n';
    } else {
        out << "R_c = " << io::format_double(rc) << " m\n";
        out << "SNR = 1 (0 dB) at R = R_c; rho(R_c) = rho0/sqrt(2) = "
            << io::format_double(budget.rho0 / std::sqrt(2.0)) << '\n';
        if (note) out << "note: " << *note << '\n';
    }
    emit("", out.str(), manifest);
    write_manifest(manifest, global, "");
}

// rho-range ------------------------------------------------------------------------

struct RhoRangeArgs {
    double rho0 = 1.0;
    std::optional<double> rc_m;
    std::string config;
    double r_min = 0.0;
    double r_max = 0.0;
    long steps = 101;
    std::string out;
};

void run_rho_range(const RhoRangeArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    double rho0 = args.rho0;
    double rc = 0.0;
    if (!args.config.empty()) {
        const auto budget = load_budget(args.config);
        rc = noisecorr::characteristic_range(budget);
        rho0 = budget.rho0;
    } else if (args.rc_m) {
        rc = *args.rc_m;
    } else {
        throw noisecorr::InvalidArgument("rho-range needs --rc-m or --config");
    }
    if (!(args.r_min >= 0.0 && args.r_max > args.r_min)) {
        throw noisecorr::InvalidArgument("require 0 <= --r-min < --r-max");
    }
    if (args.steps < 2) throw noisecorr::InvalidArgument("--steps must be at least 2");

    const noisecorr::RangeProfile profile(rho0, rc);
    std::ostringstream out;
    out << "# R_c = " << io::format_double(rc) << " m, rho = rho0/sqrt(2) = "
        << io::format_double(noisecorr::rho_at_range(profile, rc)) << '\n';
    out << "range_m,rho\n";
    for (long i = 0; i < args.steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(args.steps - 1);
        const double r = i + 1 == args.steps ? args.r_max : args.r_min + (args.r_max - args.r_min) * t;
        out << io::format_double(r) << ',' << io::format_double(noisecorr::rho_at_range(profile, r)) << '\n';
    }

    manifest.parameters = {{"rho0", rho0},      {"rc_m", rc},          {"r_min", args.r_min},
                           {"r_max", args.r_max}, {"steps", args.steps}, {"config", args.config}};
    emit(args.out, out.str(), manifest);
    write_manifest(manifest, global, args.out);
}

// roc ----------------------------------------------------------------------------------

struct RocArgs {
    std::string model = "noise";
    std::optional<double> rho;
    std::optional<double> snr;
    double rho0 = 1.0;
    std::optional<double> rc_m;
    std::string config;
    std::optional<double> range;
    long n = 150;
    std::string grid;
    std::string format = "csv";
    std::string out;
};

void run_roc(const RocArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    if (args.n < 1) throw noisecorr::InvalidArgument("--n must be at least 1");
    const auto model = noisecorr::parse_roc_model(args.model);
    if (model == noisecorr::RocModel::Empirical) {
        throw noisecorr::InvalidArgument("use mc-roc for empirical curves");
    }
    const std::vector<double> grid = args.grid.empty() ? noisecorr::default_pfa_grid()
                                                       : noisecorr::parse_pfa_grid(args.grid);

    std::optional<noisecorr::RangeProfile> profile;
    if (args.range) {
        double rho0 = args.rho0;
        double rc = 0.0;
        if (!args.config.empty()) {
            const auto budget = load_budget(args.config);
            rc = noisecorr::characteristic_range(budget);
            rho0 = budget.rho0;
        } else if (args.rc_m) {
            rc = *args.rc_m;
        } else {
            throw noisecorr::InvalidArgument("--range needs --rc-m or --config");
        }
        profile.emplace(rho0, rc);
    }

    double strength = 0.0;
    if (model == noisecorr::RocModel::NoiseRadar) {
        if (args.snr) throw noisecorr::InvalidArgument("--snr applies to the conventional model");
        if (args.rho && profile) throw noisecorr::InvalidArgument("give either --rho or --range, not both");
        if (args.rho) {
            strength = *args.rho;
        } else if (profile) {
            strength = noisecorr::rho_at_range(*profile, *args.range);
        } else {
            throw noisecorr::InvalidArgument("noise model needs --rho or --range with --rc-m/--config");
        }
    } else {
        if (args.rho) throw noisecorr::InvalidArgument("--rho applies to the noise model");
        if (args.snr && profile) throw noisecorr::InvalidArgument("give either --snr or --range, not both");
        if (args.snr) {
            strength = *args.snr;
        } else if (profile) {
            strength = noisecorr::snr_at_range(*profile, *args.range);
        } else {
            throw noisecorr::InvalidArgument("conventional model needs --snr or --range with --rc-m/--config");
        }
    }

    noisecorr::RocCurve curve =
        noisecorr::roc_curve(model, strength, static_cast<std::size_t>(args.n), grid);
    curve.range = args.range;
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << '\n';

    std::ostringstream out;
    if (args.format == "json") {
        out << io::to_json(curve).dump(2) << '\n';
    } else {
        io::write_roc_csv(out, curve);
    }

    manifest.parameters = {{"model", args.model},
                           {"strength", strength},
                           {"n", args.n},
                           {"range_m", args.range ? json(*args.range) : json(nullptr)},
                           {"p_fa_grid", args.grid.empty() ? json("default") : json(args.grid)},
                           {"format", args.format}};
    emit(args.out, out.str(), manifest);
    write_manifest(manifest, global, args.out);
}

// simulate -----------------------------------------------------------------------------

struct SimulateArgs {
    double p1 = 1.0;
    double p2 = 1.0;
    double rho = 0.0;
    double phi = 0.0;
    std::string coupling = "rotation";
    long n = 1000;
    std::uint64_t seed = 0;
    bool allow_degenerate = false;
    std::string out;
};

void run_simulate(const SimulateArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    if (args.n < 1) throw noisecorr::InvalidArgument("--n must be at least 1");
    const noisecorr::QtmsCovariance params(args.p1, args.p2, args.rho, args.phi,
                                           noisecorr::parse_coupling(args.coupling));
    const auto block = noisecorr::synthesize(params, static_cast<std::size_t>(args.n), args.seed,
                                             {.allow_degenerate = args.allow_degenerate});
    io::save_samples(args.out, block);
    manifest.outputs = {args.out, io::sidecar_path(args.out).string()};
    manifest.parameters = {{"params", io::to_json(params)},
                           {"n", args.n},
                           {"seed", args.seed},
                           {"allow_degenerate", args.allow_degenerate}};
    write_manifest(manifest, global, args.out);
}

// estimate -----------------------------------------------------------------------------

struct EstimateArgs {
    std::string in;
    std::string coupling = "rotation";
    bool mean_subtracted = false;
    std::optional<double> threshold;
    std::string out;
};

void run_estimate(const EstimateArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    const auto coupling = noisecorr::parse_coupling(args.coupling);
    const auto block = io::load_samples(args.in);
    noisecorr::require_fluctuating_channels(block);
    const auto estimator = args.mean_subtracted ? noisecorr::CovarianceEstimator::MeanSubtracted
                                                : noisecorr::CovarianceEstimator::KnownZeroMean;
    const auto result = noisecorr::fit(noisecorr::sample_covariance(block, estimator), coupling);
    if (result.clipped) std::cerr << "warning: rho-hat clipped to 1\n";
    if (args.threshold) {
        if (!(*args.threshold >= 0.0 && *args.threshold <= 1.0)) {
            throw noisecorr::InvalidArgument("--threshold must lie in [0, 1]");
        }
        std::cerr << (result.rho > *args.threshold ? "detection" : "no detection") << " (rho_hat = "
                  << io::format_double(result.rho) << ", threshold = " << io::format_double(*args.threshold)
                  << ")\n";
    }

    manifest.parameters = {{"in", args.in},
                           {"coupling", args.coupling},
                           {"mean_subtracted", args.mean_subtracted},
                           {"threshold", args.threshold ? json(*args.threshold) : json(nullptr)}};
    emit(args.out, io::to_json(result).dump(2) + "\n", manifest);
    write_manifest(manifest, global, args.out);
}

// mc-roc -------------------------------------------------------------------------------

struct McRocArgs {
    long n = 150;
    double rho = 0.2;
    double phi = 0.0;
    std::string coupling = "rotation";
    long trials_h0 = 1000;
    long trials_h1 = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    bool randomize_phase = false;
    std::string grid;
    std::string out;
    std::string curve_csv;
};

void run_mc_roc(const McRocArgs& args, RunManifest& manifest, const GlobalOptions& global) {
    if (args.n < 2 || args.trials_h0 < 1 || args.trials_h1 < 1) {
        throw noisecorr::InvalidArgument("--n must be >= 2 and trial counts >= 1");
    }
    noisecorr::TrialConfig config;
    config.n_samples = static_cast<std::size_t>(args.n);
    config.rho = args.rho;
    config.phi = args.phi;
    config.coupling = noisecorr::parse_coupling(args.coupling);
    config.trials_h0 = static_cast<std::size_t>(args.trials_h0);
    config.trials_h1 = static_cast<std::size_t>(args.trials_h1);
    config.base_seed = args.seed;
    config.randomize_phase = args.randomize_phase;

    const std::vector<double> grid = args.grid.empty() ? noisecorr::parse_pfa_grid("0.01:0.5:30:log")
                                                       : noisecorr::parse_pfa_grid(args.grid);
    const auto emp = noisecorr::run_trials(config, grid, args.workers);
    const auto cmp = noisecorr::compare_to_theory(emp);
    for (const auto& w : cmp.warnings) std::cerr << "warning: " << w << '\n';

    if (!args.curve_csv.empty()) {
        std::ostringstream csv;
        io::write_roc_csv(csv, emp.curve);
        io::write_text_file(args.curve_csv, csv.str());
        manifest.outputs.push_back(args.curve_csv);
    }

    manifest.parameters = {{"config", io::to_json(config)},
                           {"p_fa_grid", args.grid.empty() ? json("0.01:0.5:30:log") : json(args.grid)},
                           {"workers", args.workers}};
    emit(args.out, io::comparison_report(emp, cmp).dump(2) + "\n", manifest);
    write_manifest(manifest, global, args.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-coefficient performance prediction for coherent noise radars", "noisecorr"};
    app.set_version_flag("--version", NOISECORR_VERSION);
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--manifest", global.manifest_path,
                   "Run manifest path (default: <out>.manifest.json when --out is given)");

    RunManifest manifest;
    manifest.argv.assign(argv, argv + argc);

    RcArgs rc;
    auto* rc_cmd = app.add_subcommand("rc", "Characteristic range R_c of a link budget");
    rc_cmd->add_option("--config", rc.config, "LinkBudget JSON")->required();
    rc_cmd->add_flag("--json", rc.as_json, "Print JSON instead of text");

    RhoRangeArgs rr;
    auto* rr_cmd = app.add_subcommand("rho-range", "Sweep rho(R) over range, CSV output");
    rr_cmd->add_option("--rho0", rr.rho0, "Maximum correlation rho0")->capture_default_str();
    auto* rr_rc = rr_cmd->add_option("--rc-m", rr.rc_m, "Characteristic range [m]");
    rr_cmd->add_option("--config", rr.config, "LinkBudget JSON (instead of --rho0/--rc-m)")
        ->excludes(rr_rc);
    rr_cmd->add_option("--r-min", rr.r_min, "First range [m]")->capture_default_str();
    rr_cmd->add_option("--r-max", rr.r_max, "Last range [m]")->required();
    rr_cmd->add_option("--steps", rr.steps, "Number of rows (>= 2)")->capture_default_str();
    rr_cmd->add_option("--out", rr.out, "Output CSV (default stdout)");

    RocArgs roc;
    auto* roc_cmd = app.add_subcommand("roc", "Theoretical ROC curve");
    roc_cmd->add_option("--model", roc.model, "noise | conventional")
        ->check(CLI::IsMember({"noise", "conventional"}))
        ->capture_default_str();
    roc_cmd->add_option("--rho", roc.rho, "Correlation coefficient (noise model)");
    roc_cmd->add_option("--snr", roc.snr, "Linear single-pulse SNR (conventional model)");
    roc_cmd->add_option("--rho0", roc.rho0, "rho0 for --range mode")->capture_default_str();
    auto* roc_rc = roc_cmd->add_option("--rc-m", roc.rc_m, "Characteristic range [m] for --range mode");
    roc_cmd->add_option("--config", roc.config, "LinkBudget JSON for --range mode")
        ->excludes(roc_rc);
    roc_cmd->add_option("--range", roc.range, "Target range [m]");
    roc_cmd->add_option("--n", roc.n, "Integration count N")->capture_default_str();
    roc_cmd->add_option("--p-fa-grid", roc.grid, "min:max:steps:log|lin");
    roc_cmd->add_option("--format", roc.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    roc_cmd->add_option("--out", roc.out, "Output file (default stdout)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Synthesize a four-channel sample block");
    sim_cmd->add_option("--p1", sim.p1, "Received power")->capture_default_str();
    sim_cmd->add_option("--p2", sim.p2, "Reference power")->capture_default_str();
    sim_cmd->add_option("--rho", sim.rho, "Correlation coefficient")->capture_default_str();
    sim_cmd->add_option("--phi", sim.phi, "Phase [rad]")->capture_default_str();
    sim_cmd->add_option("--coupling", sim.coupling, "rotation | reflection")->capture_default_str();
    sim_cmd->add_option("--n", sim.n, "Sample count")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
    sim_cmd->add_flag("--allow-degenerate", sim.allow_degenerate, "Replace rho = 1 by 1 - 1e-12");
    sim_cmd->add_option("--out", sim.out, "Output CSV (sidecar written next to it)")->required();

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "Fit rho-hat to a sample block");
    est_cmd->add_option("--in", est.in, "Sample CSV")->required();
    est_cmd->add_option("--coupling", est.coupling, "rotation | reflection")->capture_default_str();
    est_cmd->add_flag("--mean-subtracted", est.mean_subtracted, "Remove the sample mean before fitting");
    est_cmd->add_option("--threshold", est.threshold, "Report a detection decision on stderr");
    est_cmd->add_option("--out", est.out, "Output JSON (default stdout)");

    McRocArgs mc;
    auto* mc_cmd = app.add_subcommand("mc-roc", "Monte Carlo ROC and comparison with theory");
    mc_cmd->add_option("--n", mc.n, "Samples per trial N")->capture_default_str();
    mc_cmd->add_option("--rho", mc.rho, "H1 correlation coefficient")->capture_default_str();
    mc_cmd->add_option("--phi", mc.phi, "Phase [rad]")->capture_default_str();
    mc_cmd->add_option("--coupling", mc.coupling, "rotation | reflection")->capture_default_str();
    mc_cmd->add_option("--trials-h0", mc.trials_h0, "H0 trials")->capture_default_str();
    mc_cmd->add_option("--trials-h1", mc.trials_h1, "H1 trials")->capture_default_str();
    mc_cmd->add_option("--seed", mc.seed, "Base seed")->required();
    mc_cmd->add_option("--workers", mc.workers, "Worker threads (0 = all cores)")->capture_default_str();
    mc_cmd->add_flag("--randomize-phase", mc.randomize_phase, "Draw phi uniformly per trial");
    mc_cmd->add_option("--p-fa-grid", mc.grid, "min:max:steps:log|lin (default 0.01:0.5:30:log)");
    mc_cmd->add_option("--out", mc.out, "Report JSON (default stdout)");
    mc_cmd->add_option("--curve-csv", mc.curve_csv, "Also write the empirical curve as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*rc_cmd) {
            manifest.command = "rc";
            run_rc(rc, manifest, global);
        } else if (*rr_cmd) {
            manifest.command = "rho-range";
            run_rho_range(rr, manifest, global);
        } else if (*roc_cmd) {
            manifest.command = "roc";
            run_roc(roc, manifest, global);
        } else if (*sim_cmd) {
            manifest.command = "simulate";
            run_simulate(sim, manifest, global);
        } else if (*est_cmd) {
            manifest.command = "estimate";
            run_estimate(est, manifest, global);
        } else if (*mc_cmd) {
            manifest.command = "mc-roc";
            run_mc_roc(mc, manifest, global);
        }
    } catch (const noisecorr::FormatError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const noisecorr::DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return kNumeric;
    } catch (const noisecorr::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const noisecorr::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
