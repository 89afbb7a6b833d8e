"""Data-less basic-LOTOS-style process algebra."""

from .syntax import (
    DELTA, EXIT, STOP, TAU, ArityError, Behaviour, Choice, Disable, Enable,
    Exit, Hide, Instantiate, Parallel, PaError, Prefix, ProcessDef,
    ReservedGateError, Specification, Stop, UndeclaredGateError,
    UnguardedRecursionError, UnknownProcessError, check_specification,
    expr_key, free_gates, label_key, rename,
)
from .parser import PaSyntaxError, parse_behaviour, parse_pa
from .printer import format_behaviour, pretty_print
from .semantics import (
    DEFAULT_STATE_BOUND, Semantics, StateBoundExceeded, build_lts,
    derive_transitions,
)
