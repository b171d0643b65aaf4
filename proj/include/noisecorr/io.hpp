// SPDX-License-Identifier: Apache-2.0
//
// File formats.
//
//   SampleBlock   CSV, header "I1,Q1,I2,Q2", one sample per row, 17
//                 significant digits; metadata in a JSON sidecar with the
//                 same basename and a .json extension.
//   RocCurve      CSV, header "p_fa,p_d"; JSON with a params block.
//   FitResult     JSON with keys p1, p2, rho, phi, residual, clipped.
//   LinkBudget    JSON with gain_db, effective_area_m2, rcs_m2,
//                 tx_power_dbm, noise_power_dbm and optional rho0.
#pragma once

#include "noisecorr/detection.hpp"
#include "noisecorr/estimator.hpp"
#include "noisecorr/monte_carlo.hpp"
#include "noisecorr/range_model.hpp"
#include "noisecorr/synthesis.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace noisecorr::io {

using nlohmann::json;

/// Shortest text that reads back to the same double.
std::string format_double(double value);

// SampleBlock ---------------------------------------------------------------

void write_samples_csv(std::ostream& out, const SampleBlock& block);
/// `source` names the stream in error messages.
SampleBlock read_samples_csv(std::istream& in, std::string_view source = "<stream>");

json sample_metadata(const SampleBlock& block);
/// Applies sidecar metadata (seed, params) to a block read from CSV.
void apply_sample_metadata(SampleBlock& block, const json& meta, std::string_view source = "<sidecar>");

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its sidecar.
void save_samples(const std::filesystem::path& csv_path, const SampleBlock& block);
/// Reads the CSV and, when present, its sidecar.
SampleBlock load_samples(const std::filesystem::path& csv_path);

// Model parameters ------------------------------------------------------------

json to_json(const QtmsCovariance& params);
QtmsCovariance covariance_from_json(const json& j, std::string_view source = "<json>");

json to_json(const FitResult& fit);
FitResult fit_from_json(const json& j, std::string_view source = "<json>");

/// Reads the dB/dBm link-budget schema and converts to linear units.
LinkBudget link_budget_from_json(const json& j, std::string_view source = "<json>");
json link_budget_to_json(const LinkBudget& budget);

// ROC curves -------------------------------------------------------------------

void write_roc_csv(std::ostream& out, const RocCurve& curve);
RocCurve read_roc_csv(std::istream& in, std::string_view source = "<stream>");
json to_json(const RocCurve& curve);

// Monte Carlo --------------------------------------------------------------------

json to_json(const TrialConfig& config);
TrialConfig trial_config_from_json(const json& j, std::string_view source = "<json>");

/// Comparison report: config echo, grid, empirical and theoretical p_d, gaps
/// and confidence-interval flags.
json comparison_report(const EmpiricalRoc& emp, const TheoryComparison& cmp);

// Files --------------------------------------------------------------------------

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace noisecorr::io
