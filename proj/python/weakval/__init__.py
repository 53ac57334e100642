"""Weak values, Kirkwood-Dirac quasiprobabilities and their coherence and contextuality witnesses."""

from ._weakval import (
    ProblemError,
    WeakvalError,
    __version__,
    bargmann,
    check_coherence,
    fragment,
    frame_graph,
    observable,
    pointer,
    quasi_probabilities,
    reproduce,
    run,
    scan,
    search,
    weak_value,
)

__all__ = [
    "ProblemError",
    "WeakvalError",
    "__version__",
    "bargmann",
    "check_coherence",
    "fragment",
    "frame_graph",
    "observable",
    "pointer",
    "quasi_probabilities",
    "reproduce",
    "run",
    "scan",
    "search",
    "weak_value",
]
