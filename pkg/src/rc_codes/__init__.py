"""
rc_codes - Rate-compatible codes over Z2 and Z4 for coherent and non-coherent detection
"""

__version__ = "0.1.0"

from .config import WorkbenchConfig, DEFAULT_CONFIG
from .ring_codes import GeneratorMatrix, InfoWord, RingId, weight_spectrum, nc_min_distance
from .greedy_builder import BuildConfig, CodeFamily, Constraint, greedy_construct, multi_run_best
from .bounds import SnrPoint, required_dmin, union_bound_coherent, union_bound_noncoherent
from .mc_simulator import SimConfig, estimate_fer
from .hex_codec import parse_hex_document, emit_hex_document, load_appendix
from .run_pool import RunPool
from .main import CodeWorkbench, main

__all__ = [
    "CodeWorkbench",
    "WorkbenchConfig",
    "DEFAULT_CONFIG",
    "GeneratorMatrix",
    "InfoWord",
    "RingId",
    "weight_spectrum",
    "nc_min_distance",
    "BuildConfig",
    "CodeFamily",
    "Constraint",
    "greedy_construct",
    "multi_run_best",
    "SnrPoint",
    "required_dmin",
    "union_bound_coherent",
    "union_bound_noncoherent",
    "SimConfig",
    "estimate_fer",
    "parse_hex_document",
    "emit_hex_document",
    "load_appendix",
    "RunPool",
    "main",
]
