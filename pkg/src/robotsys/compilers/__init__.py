"""Constructive compilers from finite functions to robot systems."""

from .drawing import DegreeReducedGraph, GridDrawing, grid_embed, reduce_degree
from .general import compile_large_girth, compile_long_quotient_path, shortest_cycle
from .paths import (check_opt2, compile_complete, compile_factorial_path, compile_min_size,
                    compile_oriented_path, is_sequential, min_size_parameter, sjt_sequence)
from .rings import compile_oriented_ring, compile_unoriented

__all__ = [
    "DegreeReducedGraph", "GridDrawing", "grid_embed", "reduce_degree",
    "compile_large_girth", "compile_long_quotient_path", "shortest_cycle",
    "check_opt2", "compile_complete", "compile_factorial_path", "compile_min_size",
    "compile_oriented_path", "is_sequential", "min_size_parameter", "sjt_sequence",
    "compile_oriented_ring", "compile_unoriented",
]
