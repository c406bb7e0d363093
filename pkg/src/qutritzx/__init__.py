"""Qutrit ZX-calculus: diagrams, exact semantics over Z[w], rewriting, and graph states."""

from .diagram import Diagram, DiagramError, Kind, Node
from .graphstate import Multigraph, graph_state_diagram, lc_unitary, local_complement, state_of_graph
from .phases import Angle, PhasePair
from .semantics import Eisenstein, SemMatrix, interpret, proportional_eq

__all__ = [
    "Angle",
    "PhasePair",
    "Diagram",
    "DiagramError",
    "Kind",
    "Node",
    "Eisenstein",
    "SemMatrix",
    "interpret",
    "proportional_eq",
    "Multigraph",
    "graph_state_diagram",
    "state_of_graph",
    "local_complement",
    "lc_unitary",
]
