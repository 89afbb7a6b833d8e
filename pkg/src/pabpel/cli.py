"""Command-line front end.

Exit codes: 0 the verdict holds (or the command succeeded), 1 it fails or
the search was exhausted, 2 usage, input or mapping error, 3 a state or
saturation bound was exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bpel.validate import errors as bpel_errors
from .bpel.xmlio import BpelError, parse_bpel, serialize_bpel
from .lts.equivalence import (
    Kind, SaturationBoundExceeded, minimize, simulation_preorder, strong_bisim, weak_bisim,
)
from .lts.model import AutFormatError, Lts, read_aut, write_aut
from .mapping import (
    InvalidProcess, MappingError, UnmappableConstruct, bpel_to_pa, canonical,
    check_mapping_equivalence, pa_to_bpel,
)
from .pa.parser import parse_pa
from .pa.printer import pretty_print
from .pa.semantics import DEFAULT_STATE_BOUND, StateBoundExceeded, build_lts
from .pa.syntax import PaError
from .report import ERROR, EXHAUSTED, FAILS, HOLDS, AnalysisReport, lts_statistics, result_details
from .services import (
    ManifestError, check_composition, read_manifest, redundancy_check,
    search_composition, shared_sync_sets,
)
from .verify import FormulaError, Relation, format_formula, model_check, parse_formula, refine_check

EXIT_CODES = {HOLDS: 0, FAILS: 1, EXHAUSTED: 1, ERROR: 2}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _suffix(path: str, allowed: tuple) -> str:
    suffix = Path(path).suffix
    if suffix not in allowed:
        raise UsageError(f"{path}: expected a {' or '.join(allowed)} file")
    return suffix


def load_lts(path: str, entry: str | None, bound: int) -> Lts:
    suffix = _suffix(path, (".pa", ".bpel", ".aut"))
    text = _read(path)
    if suffix == ".aut":
        return read_aut(text)
    if suffix == ".bpel":
        spec = bpel_to_pa(parse_bpel(text))[0]
    else:
        spec = parse_pa(text)
    if entry is not None and entry not in spec:
        raise UsageError(f"{path}: process {entry!r} is not defined")
    return build_lts(spec, entry, state_bound=bound)


def _emit(args, report: AnalysisReport, artifact: str | None = None) -> int:
    """Write the artifact to ``-o`` (or stdout when not reporting) and the report."""
    out = getattr(args, "output", None)
    if report.elapsed_ms is None:
        report.elapsed_ms = (time.perf_counter() - args.started) * 1000
    if artifact is not None and out:
        Path(out).write_text(artifact, encoding="utf-8")
    if args.json:
        if artifact is not None and not out:
            report.details["output"] = artifact
        sys.stdout.write(report.to_json(args.timing))
    elif artifact is not None and not out:
        sys.stdout.write(artifact)
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)
    else:
        sys.stdout.write(report.to_text(args.timing))
    return EXIT_CODES[report.verdict]


def _size(lts: Lts) -> dict:
    return {"states": lts.num_states, "transitions": len(lts.transitions)}


# -- subcommands ------------------------------------------------------------

def cmd_parse(args) -> int:
    suffix = _suffix(args.file, (".pa", ".bpel"))
    text = _read(args.file)
    if suffix == ".pa":
        spec = parse_pa(text)
        report = AnalysisReport("parse", HOLDS, {"format": "pa", "processes": len(spec.definitions)})
        return _emit(args, report, pretty_print(spec))
    proc = parse_bpel(text)
    problems = bpel_errors(proc)
    if problems:
        raise InvalidProcess(problems)
    report = AnalysisReport("parse", HOLDS, {"format": "bpel"}, list(proc.warnings))
    return _emit(args, report, serialize_bpel(canonical(proc)))


def cmd_lts(args) -> int:
    lts = load_lts(args.file, args.entry, args.state_bound)
    report = AnalysisReport("lts", HOLDS, {"statistics": _size(lts)})
    return _emit(args, report, write_aut(lts))


def cmd_equivalence(args) -> int:
    a = load_lts(args.left, args.entry, args.state_bound)
    b = load_lts(args.right, args.entry, args.state_bound)
    kind = Kind.WEAK if args.weak else Kind.STRONG
    if args.command == "bisim":
        result = weak_bisim(a, b) if args.weak else strong_bisim(a, b)
    else:
        result = simulation_preorder(a, b, kind)
    details = {"kind": kind.value, **result_details(result)}
    details["statistics"].update(lts_statistics("left", a))
    details["statistics"].update(lts_statistics("right", b))
    return _emit(args, AnalysisReport(args.command, HOLDS if result.holds else FAILS, details))


def cmd_minimize(args) -> int:
    lts = load_lts(args.file, args.entry, args.state_bound)
    small = minimize(lts, Kind.WEAK if args.weak else Kind.STRONG)
    details = {"statistics": {**lts_statistics("input", lts), **lts_statistics("output", small)}}
    return _emit(args, AnalysisReport("minimize", HOLDS, details), write_aut(small))


def cmd_check(args) -> int:
    lts = load_lts(args.file, args.entry, args.state_bound)
    _suffix(args.formula, (".mcl",))
    formula = parse_formula(_read(args.formula))
    result = model_check(lts, formula)
    details = {
        "formula": format_formula(formula),
        "satisfyingStates": sorted(result.states),
        "statistics": _size(lts),
    }
    return _emit(args, AnalysisReport("check", HOLDS if result.holds else FAILS, details))


def cmd_refine(args) -> int:
    specs = []
    for path in (args.abstract, args.concrete):
        _suffix(path, (".pa",))
        specs.append((parse_pa(_read(path)), None))
    report = refine_check(specs[0], specs[1], Relation(args.relation), args.state_bound)
    return _emit(args, report)


def cmd_to_pa(args) -> int:
    _suffix(args.file, (".bpel",))
    spec, mapping = bpel_to_pa(parse_bpel(_read(args.file)))
    report = AnalysisReport("to-pa", HOLDS, mapping.to_dict(), list(mapping.warnings))
    return _emit(args, report, pretty_print(spec))


def cmd_to_bpel(args) -> int:
    _suffix(args.file, (".pa",))
    spec = parse_pa(_read(args.file))
    try:
        proc, mapping = pa_to_bpel(spec, args.entry)
    except UnmappableConstruct as exc:
        for path, reason in exc.report.unmappable:
            print(f"unmappable at {path}: {reason}", file=sys.stderr)
        return _emit(args, AnalysisReport("to-bpel", ERROR, exc.report.to_dict()))
    return _emit(args, AnalysisReport("to-bpel", HOLDS, mapping.to_dict()), serialize_bpel(proc))


def cmd_roundtrip(args) -> int:
    _suffix(args.file, (".bpel",))
    return _emit(args, check_mapping_equivalence(parse_bpel(_read(args.file)), args.state_bound))


def cmd_compose(args) -> int:
    _suffix(args.manifest, (".svcs",))
    sset = read_manifest(args.manifest)
    if sset.goal is None:
        raise UsageError(f"{args.manifest}: composition needs a goal line")
    if not sset.services:
        raise UsageError(f"{args.manifest}: no services listed")
    if args.search:
        k = args.max_components if args.max_components is not None else len(sset.services)
        if not 1 <= k <= len(sset.services):
            raise UsageError(f"--bound must be between 1 and {len(sset.services)}")
        report = search_composition(sset.goal, sset.services, k, workers=args.workers,
                                    exhaustive_sync=args.exhaustive_sync, state_bound=args.state_bound)
    else:
        comps = sset.services
        hide_set = frozenset().union(*(c.gates for c in comps)) - sset.goal.gates
        report = check_composition(sset.goal, comps, shared_sync_sets(comps), hide_set, args.state_bound)
    return _emit(args, report)


def cmd_redundant(args) -> int:
    _suffix(args.manifest, (".svcs",))
    sset = read_manifest(args.manifest)
    if len(sset.services) < 2:
        raise UsageError(f"{args.manifest}: redundancy needs at least two services")
    return _emit(args, redundancy_check(sset, args.state_bound))


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--timing", action="store_true", help="include elapsed time in the report")

    parser = argparse.ArgumentParser(
        prog="pabpel", description="Process algebra and BPEL translation and verification.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name, func, help_text, *, entry=False, output=False):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        states_flag = "--state-bound" if name == "compose" else "--bound"
        p.add_argument(states_flag, dest="state_bound", type=int, default=DEFAULT_STATE_BOUND,
                       metavar="N", help=f"maximum number of LTS states (default {DEFAULT_STATE_BOUND})")
        if entry:
            p.add_argument("--entry", metavar="P", help="entry process (default: the first)")
        if output:
            p.add_argument("-o", "--output", metavar="OUT", help="write the result to OUT")
        return p

    p = add("parse", cmd_parse, "validate a .pa or .bpel file and print its canonical form",
            output=True)
    p.add_argument("file")
    p = add("lts", cmd_lts, "generate the LTS of a specification", entry=True, output=True)
    p.add_argument("file")
    for name, what in (("bisim", "are A and B bisimilar?"),
                       ("simulate", "does B simulate A?")):
        p = add(name, cmd_equivalence, what, entry=True)
        p.add_argument("left", metavar="A")
        p.add_argument("right", metavar="B")
        p.add_argument("--weak", action="store_true", help="ignore internal steps")
    p = add("minimize", cmd_minimize, "quotient an LTS by bisimilarity", entry=True, output=True)
    p.add_argument("file")
    p.add_argument("--weak", action="store_true", help="use weak bisimilarity")
    p = add("check", cmd_check, "model-check a formula", entry=True)
    p.add_argument("file")
    p.add_argument("formula", metavar="FORMULA.mcl")
    p = add("refine", cmd_refine, "check a concrete design against an abstract one")
    p.add_argument("abstract")
    p.add_argument("concrete")
    p.add_argument("--relation", choices=[r.value for r in Relation], default=Relation.WEAK_BISIM.value)
    p = add("to-pa", cmd_to_pa, "translate BPEL to the process algebra", output=True)
    p.add_argument("file")
    p = add("to-bpel", cmd_to_bpel, "translate the process algebra to BPEL", entry=True, output=True)
    p.add_argument("file")
    p = add("roundtrip", cmd_roundtrip, "check that BPEL -> PA -> BPEL preserves behaviour")
    p.add_argument("file")
    p = add("compose", cmd_compose, "check or search a composition of services against the goal")
    p.add_argument("manifest", metavar="MANIFEST.svcs")
    p.add_argument("--search", action="store_true", help="search subsets of the services")
    p.add_argument("--bound", dest="max_components", type=int, metavar="K",
                   help="largest subset to try when searching (default: all services)")
    p.add_argument("--workers", type=int, default=1, metavar="N",
                   help="worker processes for the search (default 1)")
    p.add_argument("--exhaustive-sync", action="store_true",
                   help="try every synchronisation set (subsets of at most 2)")
    p = add("redundant", cmd_redundant, "report services another service already covers")
    p.add_argument("manifest", metavar="MANIFEST.svcs")
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.state_bound < 1:
        print("error: the state bound must be positive", file=sys.stderr)
        return 2
    args.started = time.perf_counter()
    try:
        return args.func(args)
    except (StateBoundExceeded, SaturationBoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvalidProcess as exc:
        for d in exc.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return 2
    except (UsageError, PaError, BpelError, AutFormatError, FormulaError, ManifestError,
            MappingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
