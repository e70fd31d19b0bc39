"""Arithmetic invariants, window measures and dynamical classification of B-free systems."""

from .bset import BSet, ExplicitBSet, family_catalog, make_bset
from .crt import (
    CylinderSpec,
    HPoint,
    bfree_crt_search,
    block_containment_check,
    crt_solve,
    phi_block,
    theta_of_block,
)
from .density import (
    DensityEstimate,
    davenport_erdos_trace,
    exact_density_of_multiples,
    interval_density,
    light_tails_trace,
    log_density_partial,
)
from .errors import (
    BFreeError,
    BudgetExceeded,
    ConfigError,
    DensityCapError,
    IncompatibleResidues,
    SieveBudgetError,
)
from .filtration import build_filtration, compute_dk, detect_a_infinity, mef_descriptor
from .sieve import EtaBlock, residue_coverage, sieve_eta, sieve_progression
from .window import classify, haar_regularity_scan, toeplitz_positions, window_measures

__version__ = "0.1.0"

__all__ = [
    "BSet", "ExplicitBSet", "family_catalog", "make_bset",
    "CylinderSpec", "HPoint", "bfree_crt_search", "block_containment_check", "crt_solve",
    "phi_block", "theta_of_block",
    "DensityEstimate", "davenport_erdos_trace", "exact_density_of_multiples", "interval_density",
    "light_tails_trace", "log_density_partial",
    "BFreeError", "BudgetExceeded", "ConfigError", "DensityCapError", "IncompatibleResidues",
    "SieveBudgetError",
    "build_filtration", "compute_dk", "detect_a_infinity", "mef_descriptor",
    "EtaBlock", "residue_coverage", "sieve_eta", "sieve_progression",
    "classify", "haar_regularity_scan", "toeplitz_positions", "window_measures",
]
