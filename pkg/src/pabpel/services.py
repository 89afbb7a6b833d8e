"""Service composition against a goal, and redundancy among services.

A service is a process of a specification; its interface is the set of
free gates of its entry process.
"""

from __future__ import annotations

import itertools
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .lts.equivalence import Kind, SaturationBoundExceeded, simulation_preorder, weak_bisim
from .pa.semantics import DEFAULT_STATE_BOUND, StateBoundExceeded, build_lts
from .pa.syntax import (
    Instantiate, Parallel, ProcessDef, Specification, check_gate, hide,
    rename_processes,
)
from .report import EXHAUSTED, FAILS, HOLDS, AnalysisReport, result_details

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*\Z")


class ManifestError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Service:
    name: str
    spec: Specification
    entry: str | None = None

    @property
    def process(self) -> ProcessDef:
        return self.spec[self.entry if self.entry is not None else self.spec.entry]

    @property
    def gates(self) -> frozenset:
        return frozenset(self.process.gates)


@dataclass
class ServiceSet:
    services: list
    goal: Service | None = None
    gate_universe: frozenset = None

    def __post_init__(self) -> None:
        names = [s.name for s in self.services]
        if len(set(names)) != len(names):
            raise ValueError("service names must be unique")
        used = frozenset().union(*(s.gates for s in self.services))
        if self.gate_universe is None:
            self.gate_universe = used
        elif not used <= self.gate_universe:
            raise ValueError(f"gates {sorted(used - self.gate_universe)} are outside the gate universe")

    def by_name(self) -> list:
        return sorted(self.services, key=lambda s: s.name)


def load_service_file(path: Path) -> Specification:
    from .bpel.xmlio import parse_bpel
    from .mapping.to_pa import bpel_to_pa
    from .pa.parser import parse_pa

    text = path.read_text(encoding="utf-8")
    if path.suffix == ".bpel":
        return bpel_to_pa(parse_bpel(text))[0]
    return parse_pa(text)


def parse_manifest(text: str, base: Path = Path(".")) -> ServiceSet:
    """Read a ``.svcs`` manifest.

    Lines are ``service NAME FILE [ENTRY]`` or ``goal FILE [ENTRY]``; files
    are ``.pa`` or ``.bpel`` and resolve relative to ``base``. Blank lines
    and ``#`` comments are ignored.
    """
    services, goal = [], None
    for n, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        kind, args = words[0], words[1:]
        if kind == "service" and len(args) in (2, 3):
            name, file, *entry = args
            if not _NAME.match(name):
                raise ManifestError(f"invalid service name {name!r}", n)
        elif kind == "goal" and len(args) in (1, 2):
            name, (file, *entry) = "goal", args
            if goal is not None:
                raise ManifestError("more than one goal", n)
        else:
            raise ManifestError(f"expected 'service NAME FILE [ENTRY]' or 'goal FILE [ENTRY]', got {raw.strip()!r}", n)
        try:
            spec = load_service_file(base / file)
        except OSError as exc:
            raise ManifestError(f"cannot read {file}: {exc.strerror}", n) from None
        entry = entry[0] if entry else spec.entry
        if entry not in spec:
            raise ManifestError(f"process {entry!r} not defined in {file}", n)
        svc = Service(name, spec, entry)
        if kind == "goal":
            goal = svc
        else:
            services.append(svc)
    try:
        return ServiceSet(services, goal)
    except ValueError as exc:
        raise ManifestError(str(exc)) from None


def read_manifest(path) -> ServiceSet:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), path.parent)


# -- composition ------------------------------------------------------------

def compose(components: list, sync_sets: list, hide_set) -> tuple[Specification, object]:
    """One specification holding every component and the composed start term.

    Processes of component ``k`` are renamed ``C<k>_<name>`` so components
    may reuse process names.
    """
    if len(sync_sets) != len(components) - 1:
        raise ValueError("need one synchronisation set per adjacent pair of components")
    defs, refs = {}, []
    for k, svc in enumerate(components, 1):
        names = {d.name: f"C{k}_{d.name}" for d in svc.spec}
        for d in svc.spec:
            defs[names[d.name]] = ProcessDef(names[d.name], d.gates,
                                             rename_processes(d.body, names))
        p = svc.process
        refs.append(Instantiate(names[p.name], p.gates))
    term = refs[-1]
    for ref, sync in zip(reversed(refs[:-1]), reversed(sync_sets)):
        term = Parallel(ref, term, frozenset(check_gate(g) for g in sync))
    term = hide(sorted(check_gate(g) for g in hide_set), term)
    return Specification(defs), term


def _goal_lts(goal: Service, bound: int):
    return build_lts(goal.spec, goal.entry, state_bound=bound)


def _verdict(goal_lts, components, sync_sets, hide_set, bound):
    spec, term = compose(components, sync_sets, hide_set)
    lts = build_lts(spec, state_bound=bound, start=term)
    return weak_bisim(goal_lts, lts), lts


def _candidate_dict(components, sync_sets, hide_set) -> dict:
    return {
        "components": [c.name for c in components],
        "syncSets": [sorted(s) for s in sync_sets],
        "hide": sorted(hide_set),
    }


def check_composition(goal: Service, components: list, sync_sets: list, hide_set=(),
                      bound: int = DEFAULT_STATE_BOUND) -> AnalysisReport:
    """Is ``hide H in C1 |[S1]| (C2 |[S2]| ...)`` weakly bisimilar to the goal?"""
    start = time.perf_counter()
    goal_lts = _goal_lts(goal, bound)
    result, lts = _verdict(goal_lts, components, sync_sets, hide_set, bound)
    details = {**_candidate_dict(components, sync_sets, hide_set), **result_details(result)}
    details["statistics"].update({"goalStates": goal_lts.num_states,
                                  "compositionStates": lts.num_states,
                                  "compositionTransitions": len(lts.transitions)})
    return AnalysisReport("compose", HOLDS if result.holds else FAILS, details,
                          elapsed_ms=(time.perf_counter() - start) * 1000)


def shared_sync_sets(components: list) -> list:
    """For each nesting level, the gates shared by its left component and everything to its right."""
    out = []
    for k in range(len(components) - 1):
        rest = frozenset().union(*(c.gates for c in components[k + 1:]))
        out.append(components[k].gates & rest)
    return out


def candidates(goal: Service, components: list, bound: int, exhaustive_sync: bool = False):
    """Ranked candidate compositions: subsets by size, then by names."""
    if exhaustive_sync and bound > 2:
        raise ValueError("exhaustive synchronisation search is limited to subsets of at most 2")
    goal_gates = goal.gates
    ordered = sorted(components, key=lambda s: s.name)
    for size in range(1, bound + 1):
        for subset in itertools.combinations(ordered, size):
            gates = frozenset().union(*(c.gates for c in subset))
            hide_set = gates - goal_gates
            if exhaustive_sync and size == 2:
                pool = sorted(gates)
                syncs = [[frozenset(s)] for r in range(len(pool) + 1)
                         for s in itertools.combinations(pool, r)]
            else:
                syncs = [shared_sync_sets(list(subset))]
            for sync_sets in syncs:
                yield list(subset), sync_sets, hide_set


def _evaluate(args):
    goal_lts, components, sync_sets, hide_set, bound = args
    try:
        result, _ = _verdict(goal_lts, components, sync_sets, hide_set, bound)
    except (StateBoundExceeded, SaturationBoundExceeded) as exc:
        return "skip", str(exc)
    return ("holds" if result.holds else "fails"), None


def search_composition(goal: Service, components: list, bound: int, *,
                       workers: int | None = None, exhaustive_sync: bool = False,
                       state_bound: int = DEFAULT_STATE_BOUND) -> AnalysisReport:
    """First candidate, in rank order, whose composition is weakly bisimilar to the goal.

    With ``workers`` > 1 candidates are checked in parallel processes; the
    selected candidate, the count of candidates tried and the recorded skips
    are those of the sequential search.
    """
    if not 1 <= bound <= len(components):
        raise ValueError("bound must be between 1 and the number of components")
    start = time.perf_counter()
    goal_lts = _goal_lts(goal, state_bound)
    ranked = list(candidates(goal, components, bound, exhaustive_sync))
    jobs = ((goal_lts, c, s, h, state_bound) for c, s, h in ranked)
    skipped, found, tried = [], None, 0
    executor = ProcessPoolExecutor(workers) if workers and workers > 1 else None
    try:
        outcomes = executor.map(_evaluate, jobs, chunksize=4) if executor else map(_evaluate, jobs)
        for rank, (status, why) in enumerate(outcomes):
            tried = rank + 1
            if status == "skip":
                skipped.append({"candidate": _candidate_dict(*ranked[rank]), "reason": why})
            elif status == "holds":
                found = ranked[rank]
                break
    finally:
        if executor:
            executor.shutdown(cancel_futures=True)
    details = {"candidatesTried": tried, "candidatesTotal": len(ranked), "skipped": skipped}
    elapsed = (time.perf_counter() - start) * 1000
    if found is None:
        return AnalysisReport("compose-search", EXHAUSTED, details, elapsed_ms=elapsed)
    details["selected"] = _candidate_dict(*found)
    return AnalysisReport("compose-search", HOLDS, details, elapsed_ms=elapsed)


# -- redundancy -------------------------------------------------------------

def redundancy_check(services: ServiceSet | list, bound: int = DEFAULT_STATE_BOUND) -> AnalysisReport:
    """Services whose behaviour another service already covers.

    ``S`` is redundant when some other service weakly simulates it. When two
    services simulate each other only the one later by name is redundant.
    The verdict is ``holds`` when at least one service is redundant.
    """
    items = services.by_name() if isinstance(services, ServiceSet) else sorted(services, key=lambda s: s.name)
    if len(items) < 2:
        raise ValueError("redundancy check needs at least two services")
    start = time.perf_counter()
    ltss, skipped = {}, []
    for svc in items:
        try:
            ltss[svc.name] = build_lts(svc.spec, svc.entry, state_bound=bound)
        except StateBoundExceeded as exc:
            skipped.append({"service": svc.name, "reason": str(exc)})
    names = [s.name for s in items if s.name in ltss]
    memo: dict = {}

    def simulates(big, small):
        if (big, small) not in memo:
            memo[big, small] = simulation_preorder(ltss[small], ltss[big], Kind.WEAK).holds
        return memo[big, small]

    redundant = []
    for s in names:
        for w in names:
            if w == s or not simulates(w, s):
                continue
            if w > s and simulates(s, w):
                continue  # mutual: the later name is the redundant one
            redundant.append({"service": s, "witness": w})
            break
    details = {"redundant": redundant, "services": names, "skipped": skipped}
    return AnalysisReport("redundant", HOLDS if redundant else FAILS, details,
                          elapsed_ms=(time.perf_counter() - start) * 1000)

