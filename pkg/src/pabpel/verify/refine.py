"""Hierarchical refinement: does a concrete design conform to an abstract one?"""

from __future__ import annotations

import enum
import time

from ..lts.equivalence import Kind, simulation_preorder, weak_bisim
from ..pa.semantics import DEFAULT_STATE_BOUND, build_lts
from ..pa.syntax import Specification
from ..report import FAILS, HOLDS, AnalysisReport, lts_statistics, result_details


class Relation(str, enum.Enum):
    WEAK_BISIM = "weak-bisim"
    WEAK_SIMULATION = "weak-simulation"


def refine_check(abstract: tuple[Specification, str | None],
                 concrete: tuple[Specification, str | None],
                 relation: Relation = Relation.WEAK_BISIM,
                 bound: int = DEFAULT_STATE_BOUND) -> AnalysisReport:
    """Compare ``(spec, entry)`` pairs.

    ``WEAK_BISIM`` asks for observational equivalence. ``WEAK_SIMULATION``
    asks that the abstract design weakly simulates the concrete one, so the
    concrete design shows no behaviour the abstract one forbids. In the
    details, the left component of a state pair is the concrete state for
    simulation and the abstract state for bisimulation.
    """
    relation = Relation(relation)
    start = time.perf_counter()
    a = build_lts(abstract[0], abstract[1], state_bound=bound)
    c = build_lts(concrete[0], concrete[1], state_bound=bound)
    if relation is Relation.WEAK_BISIM:
        result = weak_bisim(a, c)
    else:
        result = simulation_preorder(c, a, Kind.WEAK)
    details = {"relation": relation.value, **result_details(result)}
    details["statistics"].update(lts_statistics("abstract", a))
    details["statistics"].update(lts_statistics("concrete", c))
    return AnalysisReport("refine", HOLDS if result.holds else FAILS, details,
                          elapsed_ms=(time.perf_counter() - start) * 1000)
