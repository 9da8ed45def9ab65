"""Fault-tolerant |0>_L preparation and error correction for the [[7,1,3]] code
on a 2D qubit grid, simulated with Pauli frames."""

__version__ = "0.1.0"

from .pauli import PauliOperator
from .circuit import Circuit, CircuitBuilder, CircuitError, GridLayout, dump_circuit, load_circuit, parse_circuit
from .code import (STEANE, is_estimated_logical_failure, is_harmful, is_true_logical_failure,
                   lookup_table, recovery_for, syndrome_from_bitstring, syndrome_of)
from .noise import NoiseParams
from .verify import build_f1s2_lut, classify_flag_patterns, enumerate_faults, verify_fault_tolerance
from .circuits import (build_flag_bridge_encoder, build_flag_circuit, build_gotorl_fb_encoder,
                       build_steane_check, build_steane_hybrid, citadel_check, load_gotorl)
from .protocols import PROTOCOLS, policy, simulate
from .stats import SweepConfig, SweepResult, fit_scaling_exponent, pseudo_threshold, run_sweep

__all__ = [
    "PauliOperator", "Circuit", "CircuitBuilder", "CircuitError", "GridLayout", "dump_circuit",
    "load_circuit", "parse_circuit", "STEANE", "is_estimated_logical_failure", "is_harmful",
    "is_true_logical_failure", "lookup_table", "recovery_for", "syndrome_from_bitstring",
    "syndrome_of", "NoiseParams", "build_f1s2_lut", "classify_flag_patterns", "enumerate_faults",
    "verify_fault_tolerance", "build_flag_bridge_encoder", "build_flag_circuit",
    "build_gotorl_fb_encoder", "build_steane_check", "build_steane_hybrid", "citadel_check",
    "load_gotorl", "PROTOCOLS", "policy", "simulate", "SweepConfig", "SweepResult",
    "fit_scaling_exponent", "pseudo_threshold", "run_sweep",
]
