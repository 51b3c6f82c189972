"""Sweep-rule cellular-automaton decoder for three-dimensional toric codes."""
__version__ = "0.1.0"
