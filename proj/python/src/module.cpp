// SPDX-License-Identifier: Apache-2.0
// Python bindings for the noisecorr library.
#include "noisecorr/covariance.hpp"
#include "noisecorr/detection.hpp"
#include "noisecorr/error.hpp"
#include "noisecorr/estimator.hpp"
#include "noisecorr/io.hpp"
#include "noisecorr/monte_carlo.hpp"
#include "noisecorr/range_model.hpp"
#include "noisecorr/synthesis.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace noisecorr;

namespace {

using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;

py::tuple curve_arrays(const RocCurve& curve) {
    std::vector<double> p_fa, p_d;
    for (const auto& pt : curve.points) {
        p_fa.push_back(pt.p_fa);
        p_d.push_back(pt.p_d);
    }
    return py::make_tuple(py::cast(p_fa), py::cast(p_d));
}

std::vector<double> grid_or_default(const std::optional<std::vector<double>>& grid) {
    return grid ? *grid : default_pfa_grid();
}

SampleBlock block_from(const SampleMatrix& samples) {
    SampleBlock block;
    block.channels = samples;
    return block;
}

} // namespace

PYBIND11_MODULE(_noisecorr, m) {
    m.doc() = "Correlation-coefficient detection model for coherent noise radars";

    // Errors: argument problems surface as ValueError.
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ArithmeticError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<CouplingKind>(m, "CouplingKind")
        .value("ROTATION", CouplingKind::Rotation)
        .value("REFLECTION", CouplingKind::Reflection);

    py::class_<QtmsCovariance>(m, "QtmsCovariance")
        .def(py::init<double, double, double, double, CouplingKind>(), py::arg("p1"), py::arg("p2"),
             py::arg("rho"), py::arg("phi"), py::arg("coupling") = CouplingKind::Rotation)
        .def_property_readonly("p1", &QtmsCovariance::p1)
        .def_property_readonly("p2", &QtmsCovariance::p2)
        .def_property_readonly("rho", &QtmsCovariance::rho)
        .def_property_readonly("phi", &QtmsCovariance::phi)
        .def_property_readonly("coupling", &QtmsCovariance::coupling)
        .def("matrix", [](const QtmsCovariance& p) { return build_covariance(p); })
        .def("__repr__", [](const QtmsCovariance& p) {
            return "QtmsCovariance(p1=" + io::format_double(p.p1()) + ", p2=" + io::format_double(p.p2()) +
                   ", rho=" + io::format_double(p.rho()) + ", phi=" + io::format_double(p.phi()) + ", coupling='" +
                   std::string(to_string(p.coupling())) + "')";
        });

    m.def("build_covariance", &build_covariance, py::arg("params"));
    m.def("rho_from_totals", &rho_from_totals, py::arg("p1"), py::arg("p2"), py::arg("pn1"), py::arg("pn2"));

    // Synthesis / estimation ---------------------------------------------------
    m.def(
        "synthesize",
        [](const QtmsCovariance& params, std::size_t n, std::uint64_t seed, bool allow_degenerate) {
            return synthesize(params, n, seed, {.allow_degenerate = allow_degenerate}).channels;
        },
        py::arg("params"), py::arg("n"), py::arg("seed"), py::arg("allow_degenerate") = false,
        "n x 4 array of (I1, Q1, I2, Q2) rows.");

    m.def(
        "sample_covariance",
        [](const SampleMatrix& samples, bool mean_subtracted) {
            return sample_covariance(block_from(samples), mean_subtracted ? CovarianceEstimator::MeanSubtracted
                                                                          : CovarianceEstimator::KnownZeroMean);
        },
        py::arg("samples"), py::arg("mean_subtracted") = false);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("p1", &FitResult::p1)
        .def_readonly("p2", &FitResult::p2)
        .def_readonly("rho", &FitResult::rho)
        .def_readonly("phi", &FitResult::phi)
        .def_readonly("residual", &FitResult::residual)
        .def_readonly("clipped", &FitResult::clipped);

    m.def(
        "fit", [](const Matrix4& s, CouplingKind coupling) { return fit(s, coupling); }, py::arg("s_hat"),
        py::arg("coupling") = CouplingKind::Rotation);

    m.def(
        "estimate_rho",
        [](const SampleMatrix& samples, CouplingKind coupling) {
            const SampleBlock block = block_from(samples);
            require_fluctuating_channels(block);
            return fit(sample_covariance(block), coupling);
        },
        py::arg("samples"), py::arg("coupling") = CouplingKind::Rotation);

    // Range model ----------------------------------------------------------------
    py::class_<LinkBudget>(m, "LinkBudget")
        .def(py::init([](double gain_db, double effective_area_m2, double rcs_m2, double tx_power_dbm,
                         double noise_power_dbm, double rho0) {
                 LinkBudget b;
                 b.gain = db_to_linear(gain_db);
                 b.effective_area = effective_area_m2;
                 b.rcs = rcs_m2;
                 b.tx_power = dbm_to_watts(tx_power_dbm);
                 b.noise_power = dbm_to_watts(noise_power_dbm);
                 b.rho0 = rho0;
                 b.validate();
                 return b;
             }),
             py::arg("gain_db"), py::arg("effective_area_m2"), py::arg("rcs_m2"), py::arg("tx_power_dbm"),
             py::arg("noise_power_dbm"), py::arg("rho0") = 1.0)
        .def_readonly("gain", &LinkBudget::gain)
        .def_readonly("tx_power", &LinkBudget::tx_power)
        .def_readonly("noise_power", &LinkBudget::noise_power)
        .def_readonly("rho0", &LinkBudget::rho0);

    py::class_<RangeProfile>(m, "RangeProfile")
        .def(py::init<double, double>(), py::arg("rho0"), py::arg("characteristic_range"))
        .def_static("from_budget", &RangeProfile::from_budget)
        .def_property_readonly("rho0", &RangeProfile::rho0)
        .def_property_readonly("characteristic_range", &RangeProfile::characteristic_range);

    m.def("characteristic_range", py::overload_cast<const LinkBudget&>(&characteristic_range));
    m.def("characteristic_range_single_4pi", &characteristic_range_single_4pi);
    m.def("rho_at_range", &rho_at_range, py::arg("profile"), py::arg("range"));
    m.def("snr_at_range", &snr_at_range, py::arg("profile"), py::arg("range"));

    // Detection theory -----------------------------------------------------------
    m.def("marcum_q1", &marcum_q1, py::arg("a"), py::arg("b"));
    m.def("marcum_q1_complement", &marcum_q1_complement, py::arg("a"), py::arg("b"));
    m.def("noise_radar_pd", &noise_radar_pd, py::arg("p_fa"), py::arg("rho"), py::arg("n"));
    m.def("conventional_pd", &conventional_pd, py::arg("p_fa"), py::arg("snr"), py::arg("n"));
    m.def("noise_radar_pmiss", &noise_radar_pmiss, py::arg("p_fa"), py::arg("rho"), py::arg("n"));
    m.def("default_pfa_grid", &default_pfa_grid);
    m.def("parse_pfa_grid", &parse_pfa_grid, py::arg("spec"));
    m.def(
        "roc_curve",
        [](const std::string& model, double strength, std::size_t n, std::optional<std::vector<double>> grid) {
            return curve_arrays(roc_curve(parse_roc_model(model), strength, n, grid_or_default(grid)));
        },
        py::arg("model"), py::arg("strength"), py::arg("n"), py::arg("p_fa_grid") = py::none(),
        "Returns (p_fa, p_d). model is 'noise' (strength = rho) or 'conventional' (strength = SNR).");

    // Monte Carlo ----------------------------------------------------------------
    m.def(
        "mc_roc",
        [](std::size_t n_samples, double rho, double phi, CouplingKind coupling, std::size_t trials_h0,
           std::size_t trials_h1, std::uint64_t seed, std::optional<std::vector<double>> grid, unsigned workers) {
            TrialConfig cfg;
            cfg.n_samples = n_samples;
            cfg.rho = rho;
            cfg.phi = phi;
            cfg.coupling = coupling;
            cfg.trials_h0 = trials_h0;
            cfg.trials_h1 = trials_h1;
            cfg.base_seed = seed;
            const std::vector<double> g = grid ? *grid : parse_pfa_grid("0.01:0.5:30:log");
            EmpiricalRoc emp;
            {
                py::gil_scoped_release release;
                emp = run_trials(cfg, g, workers);
            }
            const io::json report = io::comparison_report(emp, compare_to_theory(emp));
            return py::module_::import("json").attr("loads")(report.dump());
        },
        py::arg("n_samples"), py::arg("rho"), py::arg("phi") = 0.0, py::arg("coupling") = CouplingKind::Rotation,
        py::arg("trials_h0") = 1000, py::arg("trials_h1") = 1000, py::arg("seed") = 0,
        py::arg("p_fa_grid") = py::none(), py::arg("workers") = 0,
        "Runs H0/H1 trials and returns the theory comparison report as a dict.");

    m.attr("__version__") = NOISECORR_VERSION;
}
