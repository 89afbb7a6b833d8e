"""Two-way translation between the BPEL subset and the process algebra."""

from .canonical import canonical
from .check import check_mapping_equivalence, round_trip
from .convention import (
    CATCH_ALL, GateTable, MappingReport, alarm_gate, fault_gate, gate_kind,
    kill_gate, parse_gate, parse_partner_gate, scope_gate,
)
from .to_bpel import UnmappableConstruct, pa_to_bpel
from .to_pa import InvalidProcess, MappingError, bpel_to_pa
