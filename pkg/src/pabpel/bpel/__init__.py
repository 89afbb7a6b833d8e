"""The BPEL subset: document model, XML reading/writing and validation."""

from .model import (
    Activity, BpelProcess, Compensate, Direction, Empty, Flow, Invoke,
    PartnerOp, Pick, Receive, Reply, Scope, Sequence, Switch, Terminate,
    Throw, Wait, While, children, partner_ops, walk,
)
from .validate import Diagnostic, RESERVED_PROCESS_PREFIXES, errors, validate
from .xmlio import (
    BPEL_NS, BpelError, CompensateOutsideHandler, FlowLinkUnsupported,
    MalformedXml, MissingAttribute, StructureError, UnknownElement,
    parse_bpel, serialize_bpel,
)
