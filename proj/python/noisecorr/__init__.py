# SPDX-License-Identifier: Apache-2.0
"""Correlation-coefficient detection model for coherent noise radars."""

from ._noisecorr import (
    CouplingKind,
    DegenerateInput,
    FitResult,
    FormatError,
    InvalidArgument,
    IoError,
    LinkBudget,
    QtmsCovariance,
    RangeProfile,
    __version__,
    build_covariance,
    characteristic_range,
    characteristic_range_single_4pi,
    conventional_pd,
    default_pfa_grid,
    estimate_rho,
    fit,
    marcum_q1,
    marcum_q1_complement,
    mc_roc,
    noise_radar_pd,
    noise_radar_pmiss,
    parse_pfa_grid,
    rho_at_range,
    rho_from_totals,
    roc_curve,
    sample_covariance,
    snr_at_range,
    synthesize,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
