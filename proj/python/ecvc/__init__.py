"""Batch edge-constrained vertex coloring and pedigree haplotype phasing."""

from ecvc._ecvc import (
    EcvcError,
    Graph,
    brute_force,
    check_ibd,
    count_d,
    localize,
    phase,
    simulate,
    solve,
)

__all__ = [
    "EcvcError",
    "Graph",
    "brute_force",
    "check_ibd",
    "count_d",
    "localize",
    "phase",
    "simulate",
    "solve",
]
