"""Two-way translation between a LOTOS-style process algebra and BPEL, with verification."""

__version__ = "0.1.0"
