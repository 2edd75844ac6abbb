"""Generalized minimum-uncertainty squeezed states: solvers, closed forms,
moments and Q-function export."""

__version__ = "0.1.0"
