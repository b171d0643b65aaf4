// SPDX-License-Identifier: Apache-2.0
#include "noisecorr/io.hpp"

#include "noisecorr/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace noisecorr::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string at(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

double parse_field(std::string_view text, std::string_view source, std::size_t line, std::string_view column) {
    double v = 0.0;
    const auto [end, err] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || err != std::errc() || end != text.data() + text.size()) {
        throw FormatError(at(source, line), "column " + std::string(column) + ": '" + std::string(text) +
                                                "' is not a number");
    }
    if (!std::isfinite(v)) {
        throw FormatError(at(source, line), "column " + std::string(column) + " is not finite");
    }
    return v;
}

std::string field_path(std::string_view source, std::string_view key) {
    return std::string(source) + ":" + std::string(key);
}

const json& require_key(const json& j, std::string_view key, std::string_view source) {
    if (!j.is_object()) throw FormatError(std::string(source), "expected a JSON object");
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw FormatError(field_path(source, key), "missing required field");
    return *it;
}

double require_number(const json& j, std::string_view key, std::string_view source) {
    const json& v = require_key(j, key, source);
    if (!v.is_number()) throw FormatError(field_path(source, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError(field_path(source, key), "must be finite");
    return d;
}

std::uint64_t require_uint(const json& j, std::string_view key, std::string_view source) {
    const json& v = require_key(j, key, source);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw FormatError(field_path(source, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known, std::string_view source) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) throw FormatError(field_path(source, key), "unknown field");
    }
}

template <typename Fn>
auto rethrow_as_format(std::string_view where, Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string(where), e.what());
    }
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// SampleBlock ---------------------------------------------------------------

void write_samples_csv(std::ostream& out, const SampleBlock& block) {
    out << "I1,Q1,I2,Q2\n";
    for (Eigen::Index r = 0; r < block.channels.rows(); ++r) {
        out << format_double(block.channels(r, 0)) << ',' << format_double(block.channels(r, 1)) << ','
            << format_double(block.channels(r, 2)) << ',' << format_double(block.channels(r, 3)) << '\n';
    }
}

SampleBlock read_samples_csv(std::istream& in, std::string_view source) {
    static constexpr std::string_view kColumns[4] = {"I1", "Q1", "I2", "Q2"};
    std::string line;
    std::size_t line_no = 0;

    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_commas(t);
        if (fields.size() != 4 || fields[0] != "I1" || fields[1] != "Q1" || fields[2] != "I2" ||
            fields[3] != "Q2") {
            throw FormatError(at(source, line_no), "expected header 'I1,Q1,I2,Q2'");
        }
        have_header = true;
    }
    if (!have_header) throw FormatError(std::string(source), "empty file (missing header)");

    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_commas(t);
        if (fields.size() != 4) {
            throw FormatError(at(source, line_no),
                              "expected 4 fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < 4; ++c) values.push_back(parse_field(fields[c], source, line_no, kColumns[c]));
    }
    if (values.empty()) throw FormatError(std::string(source), "no sample rows");

    SampleBlock block;
    block.channels.resize(static_cast<Eigen::Index>(values.size() / 4), 4);
    std::copy(values.begin(), values.end(), block.channels.data());
    return block;
}

json sample_metadata(const SampleBlock& block) {
    json j;
    j["n"] = block.size();
    j["seed"] = block.seed;
    j["rng"] = "mt19937_64 + Box-Muller (row-major, channel-minor)";
    j["columns"] = {"I1", "Q1", "I2", "Q2"};
    j["params"] = block.params ? to_json(*block.params) : json(nullptr);
    return j;
}

void apply_sample_metadata(SampleBlock& block, const json& meta, std::string_view source) {
    if (meta.contains("n")) {
        const auto n = require_uint(meta, "n", source);
        if (n != block.size()) {
            throw FormatError(field_path(source, "n"), "sidecar declares " + std::to_string(n) +
                                                           " samples but the CSV has " +
                                                           std::to_string(block.size()));
        }
    }
    if (meta.contains("seed")) block.seed = require_uint(meta, "seed", source);
    if (meta.contains("params") && !meta.at("params").is_null()) {
        block.params = covariance_from_json(meta.at("params"), field_path(source, "params"));
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

void save_samples(const std::filesystem::path& csv_path, const SampleBlock& block) {
    std::ostringstream csv;
    write_samples_csv(csv, block);
    write_text_file(csv_path, csv.str());
    write_json_file(sidecar_path(csv_path), sample_metadata(block));
}

SampleBlock load_samples(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());
    SampleBlock block = read_samples_csv(in, csv_path.string());
    const auto meta = sidecar_path(csv_path);
    if (meta != csv_path && std::filesystem::exists(meta)) {
        apply_sample_metadata(block, read_json_file(meta), meta.string());
    }
    return block;
}

// Model parameters ------------------------------------------------------------

json to_json(const QtmsCovariance& params) {
    return {{"p1", params.p1()},
            {"p2", params.p2()},
            {"rho", params.rho()},
            {"phi", params.phi()},
            {"coupling", std::string(to_string(params.coupling()))}};
}

QtmsCovariance covariance_from_json(const json& j, std::string_view source) {
    const double p1 = require_number(j, "p1", source);
    const double p2 = require_number(j, "p2", source);
    const double rho = require_number(j, "rho", source);
    const double phi = require_number(j, "phi", source);
    const json& coupling = require_key(j, "coupling", source);
    if (!coupling.is_string()) throw FormatError(field_path(source, "coupling"), "expected a string");
    return rethrow_as_format(source, [&] {
        return QtmsCovariance(p1, p2, rho, phi, parse_coupling(coupling.get<std::string>()));
    });
}

json to_json(const FitResult& fit) {
    return {{"p1", fit.p1},   {"p2", fit.p2},           {"rho", fit.rho},
            {"phi", fit.phi}, {"residual", fit.residual}, {"clipped", fit.clipped}};
}

FitResult fit_from_json(const json& j, std::string_view source) {
    FitResult f;
    f.p1 = require_number(j, "p1", source);
    f.p2 = require_number(j, "p2", source);
    f.rho = require_number(j, "rho", source);
    f.phi = require_number(j, "phi", source);
    f.residual = require_number(j, "residual", source);
    const json& clipped = require_key(j, "clipped", source);
    if (!clipped.is_boolean()) throw FormatError(field_path(source, "clipped"), "expected a boolean");
    f.clipped = clipped.get<bool>();
    return f;
}

LinkBudget link_budget_from_json(const json& j, std::string_view source) {
    reject_unknown_keys(j,
                        {"gain_db", "effective_area_m2", "rcs_m2", "tx_power_dbm", "noise_power_dbm", "rho0"},
                        source);
    LinkBudget b;
    b.gain = db_to_linear(require_number(j, "gain_db", source));
    b.effective_area = require_number(j, "effective_area_m2", source);
    b.rcs = require_number(j, "rcs_m2", source);
    b.tx_power = dbm_to_watts(require_number(j, "tx_power_dbm", source));
    b.noise_power = dbm_to_watts(require_number(j, "noise_power_dbm", source));
    if (j.contains("rho0")) b.rho0 = require_number(j, "rho0", source);
    rethrow_as_format(source, [&] {
        b.validate();
        return 0;
    });
    return b;
}

json link_budget_to_json(const LinkBudget& budget) {
    return {{"gain_db", 10.0 * std::log10(budget.gain)},
            {"effective_area_m2", budget.effective_area},
            {"rcs_m2", budget.rcs},
            {"tx_power_dbm", watts_to_dbm(budget.tx_power)},
            {"noise_power_dbm", watts_to_dbm(budget.noise_power)},
            {"rho0", budget.rho0}};
}

// ROC curves -------------------------------------------------------------------

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "p_fa,p_d\n";
    for (const RocPoint& p : curve.points) out << format_double(p.p_fa) << ',' << format_double(p.p_d) << '\n';
}

RocCurve read_roc_csv(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    RocCurve curve;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_commas(t);
        if (!have_header) {
            if (fields.size() != 2 || fields[0] != "p_fa" || fields[1] != "p_d") {
                throw FormatError(at(source, line_no), "expected header 'p_fa,p_d'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 2) throw FormatError(at(source, line_no), "expected 2 fields");
        curve.points.push_back({parse_field(fields[0], source, line_no, "p_fa"),
                                parse_field(fields[1], source, line_no, "p_d")});
    }
    if (!have_header) throw FormatError(std::string(source), "missing header 'p_fa,p_d'");
    return curve;
}

json to_json(const RocCurve& curve) {
    json params;
    if (curve.model == RocModel::Conventional) {
        params["snr"] = curve.strength;
    } else {
        params["rho"] = curve.strength;
    }
    params["n"] = curve.n;
    params["range_m"] = curve.range ? json(*curve.range) : json(nullptr);

    json j;
    j["model"] = std::string(to_string(curve.model));
    j["params"] = params;
    j["p_fa"] = json::array();
    j["p_d"] = json::array();
    for (const RocPoint& p : curve.points) {
        j["p_fa"].push_back(p.p_fa);
        j["p_d"].push_back(p.p_d);
    }
    j["warnings"] = curve.warnings;
    return j;
}

// Monte Carlo --------------------------------------------------------------------

json to_json(const TrialConfig& config) {
    return {{"n_samples", config.n_samples}, {"rho", config.rho},
            {"phi", config.phi},             {"coupling", std::string(to_string(config.coupling))},
            {"trials_h0", config.trials_h0}, {"trials_h1", config.trials_h1},
            {"base_seed", config.base_seed}, {"randomize_phase", config.randomize_phase}};
}

TrialConfig trial_config_from_json(const json& j, std::string_view source) {
    TrialConfig c;
    c.n_samples = require_uint(j, "n_samples", source);
    c.rho = require_number(j, "rho", source);
    c.phi = require_number(j, "phi", source);
    const json& coupling = require_key(j, "coupling", source);
    if (!coupling.is_string()) throw FormatError(field_path(source, "coupling"), "expected a string");
    c.coupling = rethrow_as_format(source, [&] { return parse_coupling(coupling.get<std::string>()); });
    c.trials_h0 = require_uint(j, "trials_h0", source);
    c.trials_h1 = require_uint(j, "trials_h1", source);
    c.base_seed = require_uint(j, "base_seed", source);
    if (j.contains("randomize_phase")) {
        const json& rp = j.at("randomize_phase");
        if (!rp.is_boolean()) throw FormatError(field_path(source, "randomize_phase"), "expected a boolean");
        c.randomize_phase = rp.get<bool>();
    }
    rethrow_as_format(source, [&] {
        c.validate();
        return 0;
    });
    return c;
}

json comparison_report(const EmpiricalRoc& emp, const TheoryComparison& cmp) {
    json j;
    j["config"] = to_json(emp.config);
    json grid = json::array(), emp_pd = json::array(), th_pd = json::array(), gaps = json::array();
    json lo = json::array(), hi = json::array(), in_ci = json::array(), thresholds = json::array();
    for (const ComparisonPoint& p : cmp.points) {
        grid.push_back(p.p_fa);
        emp_pd.push_back(p.p_d_empirical);
        th_pd.push_back(p.p_d_theory);
        gaps.push_back(p.gap);
        lo.push_back(p.ci_low);
        hi.push_back(p.ci_high);
        in_ci.push_back(p.theory_in_ci);
        thresholds.push_back(empirical_threshold(emp.h0_stats, p.p_fa));
    }
    j["p_fa"] = grid;
    j["threshold"] = thresholds;
    j["p_d_empirical"] = emp_pd;
    j["p_d_theory"] = th_pd;
    j["gap"] = gaps;
    j["ci_low"] = lo;
    j["ci_high"] = hi;
    j["theory_in_ci"] = in_ci;
    j["ci_level"] = 0.99;
    j["max_abs_gap"] = cmp.max_abs_gap;
    j["warnings"] = cmp.warnings;
    return j;
}

// Files --------------------------------------------------------------------------

json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace noisecorr::io
