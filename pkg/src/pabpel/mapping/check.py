"""Round-trip check: does translating back and forth keep the behaviour?"""

from __future__ import annotations

import time

from ..bpel.model import BpelProcess
from ..lts.equivalence import weak_bisim
from ..pa.semantics import DEFAULT_STATE_BOUND, build_lts
from ..report import FAILS, HOLDS, AnalysisReport, lts_statistics, result_details
from ..bpel.xmlio import serialize_bpel
from .to_bpel import pa_to_bpel
from .to_pa import bpel_to_pa


def round_trip(proc: BpelProcess) -> BpelProcess:
    spec, _ = bpel_to_pa(proc)
    back, _ = pa_to_bpel(spec, spec.entry)
    return back


def check_mapping_equivalence(proc: BpelProcess, bound: int = DEFAULT_STATE_BOUND) -> AnalysisReport:
    """Weak bisimilarity of ``T(p)`` and ``T(RT(p))`` with ``RT = pa_to_bpel . bpel_to_pa``.

    Raises ``StateBoundExceeded`` when either LTS is too large.
    """
    start = time.perf_counter()
    spec, report = bpel_to_pa(proc)
    back, _ = pa_to_bpel(spec, spec.entry)
    spec2, _ = bpel_to_pa(back)
    first = build_lts(spec, state_bound=bound)
    second = build_lts(spec2, state_bound=bound)
    result = weak_bisim(first, second)
    details = result_details(result)
    details["statistics"].update(lts_statistics("original", first))
    details["statistics"].update(lts_statistics("roundTrip", second))
    details["gateTable"] = report.gate_table.to_dict()
    details["roundTrip"] = serialize_bpel(back)
    return AnalysisReport("roundtrip", HOLDS if result.holds else FAILS, details,
                          list(report.warnings), (time.perf_counter() - start) * 1000)
