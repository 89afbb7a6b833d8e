"""CLI invocations with frozen outputs under ``tests/golden``.

Run as a script from the repository root to print every case (used by the
determinism test), or with ``--update`` to refresh the golden files.
"""

import contextlib
import io
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

F = "fixtures/"

# (name, argv, expected exit code)
CASES = [
    ("parse_bpel", ["parse", F + "kitchen_sink.bpel"], 0),
    ("parse_pa", ["parse", F + "relay.pa"], 0),
    ("parse_json", ["parse", F + "switch_otherwise.bpel", "--json"], 0),
    ("lts_pa", ["lts", F + "relay.pa"], 0),
    ("lts_entry", ["lts", F + "relay.pa", "--entry", "Front"], 0),
    ("lts_bpel_json", ["lts", F + "while_loop.bpel", "--json"], 0),
    ("lts_bound", ["lts", F + "relay.pa", "--bound", "2"], 3),
    ("bisim_self", ["bisim", F + "relay.pa", F + "relay.pa"], 0),
    ("bisim_strong_fails", ["bisim", F + "abstract.pa", F + "concrete.pa", "--json"], 1),
    ("bisim_weak", ["bisim", F + "abstract.pa", F + "concrete.pa", "--weak"], 0),
    ("simulate_holds", ["simulate", F + "single.pa", F + "choice.pa"], 0),
    ("simulate_fails", ["simulate", F + "choice.pa", F + "single.pa", "--json"], 1),
    ("minimize_weak", ["minimize", F + "kitchen_sink.bpel", "--weak"], 0),
    ("minimize_json", ["minimize", F + "relay.pa", "--json"], 0),
    ("check_nofault", ["check", F + "relay.pa", F + "nofault.mcl"], 0),
    ("check_terminates", ["check", F + "relay.pa", F + "terminates.mcl", "--json"], 0),
    ("check_fails", ["check", F + "basic.pa", F + "terminates.mcl"], 1),
    ("refine_bisim", ["refine", F + "abstract.pa", F + "concrete.pa"], 0),
    ("refine_sim", ["refine", F + "choice.pa", F + "single.pa", "--relation", "weak-simulation"], 0),
    ("refine_fails", ["refine", F + "choice.pa", F + "single.pa", "--json"], 1),
    ("to_pa", ["to-pa", F + "scope_fault.bpel"], 0),
    ("to_pa_json", ["to-pa", F + "event_handlers.bpel", "--json"], 0),
    ("to_bpel", ["to-bpel", F + "shop.pa"], 0),
    ("to_bpel_unmappable", ["to-bpel", F + "relay.pa", "--json"], 2),
    ("roundtrip", ["roundtrip", F + "scope_fault.bpel"], 0),
    ("roundtrip_json", ["roundtrip", F + "kitchen_sink.bpel", "--json"], 0),
    ("compose", ["compose", F + "relay_exact.svcs"], 0),
    ("compose_search", ["compose", F + "relay.svcs", "--search", "--bound", "2", "--json"], 0),
    ("compose_search_workers", ["compose", F + "relay.svcs", "--search", "--workers", "2"], 0),
    ("redundant", ["redundant", F + "redundancy.svcs"], 0),
    ("redundant_json", ["redundant", F + "redundancy.svcs", "--json"], 0),
    ("missing_file", ["parse", F + "nowhere.pa"], 2),
    ("wrong_suffix", ["check", F + "relay.pa", F + "basic.pa"], 2),
]


def run(argv):
    """Exit code and stdout of one in-process CLI call."""
    from pabpel.cli import main
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def golden_path(name):
    return GOLDEN / f"{name}.txt"


def _main(args):
    if args == ["--update"]:
        GOLDEN.mkdir(exist_ok=True)
        for name, argv, _ in CASES:
            golden_path(name).write_text(run(argv)[1], encoding="utf-8")
        return 0
    for name, argv, _ in CASES:
        code, out = run(argv)
        sys.stdout.write(f"== {name} {code}\n{out}")
    return 0


if __name__ == "__main__":
    sys.exit(_main(sys.argv[1:]))
