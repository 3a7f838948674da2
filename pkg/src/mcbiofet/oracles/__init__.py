"""Independent numerical checks of the closed-form capacity model."""
from .blahut import (BaResult, DiscreteChannel, binary_entropy, bsc,
                     capacity_blahut_arimoto, discretize_channel)
from .draws import perturbed_pdfs, random_params, smooth_test_pdfs
from .mi import ConvergenceError, mi_numeric
from .montecarlo import SimulationResult, normality_check, simulate_link

__all__ = [
    "BaResult", "DiscreteChannel", "binary_entropy", "bsc", "capacity_blahut_arimoto",
    "discretize_channel", "perturbed_pdfs", "random_params", "smooth_test_pdfs", "ConvergenceError", "mi_numeric",
    "SimulationResult", "normality_check", "simulate_link",
]
