"""Explicit labelled transition systems and their equivalences."""

from .model import AutFormatError, Lts, read_aut, tau_closure, write_aut
from .equivalence import (
    CheckResult, Counterexample, Kind, SaturationBoundExceeded, bisimilar,
    minimize, partition, simulation_preorder, strong_bisim, tau_saturate,
    weak_bisim,
)
