"""Capacity of a diffusive molecular link read out by a SiNW bioFET receiver."""
from .capacity import (CapacityResult, CapacityUndefined, TabulatedPdf, capacity_closed_form,
                       gaussian_entropy, mi_taylor, normalization_closed, normalization_quad,
                       optimal_input_pdf, transition_pdf)
from .link import LinkModel, SignalStats
from .params import SystemParams, default_params, load_config, save_config, validate

__version__ = "0.1.0"

__all__ = [
    "CapacityResult", "CapacityUndefined", "TabulatedPdf", "capacity_closed_form",
    "gaussian_entropy", "mi_taylor", "normalization_closed", "normalization_quad",
    "optimal_input_pdf", "transition_pdf", "LinkModel", "SignalStats", "SystemParams",
    "default_params", "load_config", "save_config", "validate",
]
