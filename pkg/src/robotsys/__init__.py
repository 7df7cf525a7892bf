"""Oblivious mobile robots on labeled graphs: configuration spaces, FSYNC
dynamics, simulation checking and universality compilers."""

__version__ = "0.1.0"
