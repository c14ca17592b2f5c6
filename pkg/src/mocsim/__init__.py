"""Measurement-only Clifford circuits with power-law-ranged parity checks."""

__version__ = "0.1.0"
