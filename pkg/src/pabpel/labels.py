"""Action labels shared by the algebra and the transition systems.

Labels are plain strings. ``i`` is the internal action and ``delta``
signals successful termination; every other label is a gate.
"""

TAU = "i"
DELTA = "delta"


def label_key(label: str) -> tuple:
    """Canonical order on labels: internal < termination < gates (lexicographic)."""
    if label == TAU:
        return (0, "")
    if label == DELTA:
        return (1, "")
    return (2, label)
