"""Exact linear-separability certificates and a polynomial-time distinguisher
for McCulloch-Pitts dynamical systems."""

from .model import (
    BitVec,
    Dichotomy,
    DimensionError,
    MPSystem,
    PointConflict,
    ThresholdUnit,
    Trace,
    apply_system,
    evaluate_unit,
)
from .separability import (
    HullWitness,
    Separator,
    SeparabilityResult,
    decide_separable,
    oracle_separable,
    verify_hull_witness,
    verify_separator,
)
from .distinguisher import (
    distinguish,
    distinguish_refined,
    generate_mp_trace,
    generate_random_trace,
)

__version__ = "0.1.0"
