"""Numerical tolerances shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # exact algebraic identities (projector relations, hermiticity, traces)
    algebraic: float = 1e-10
    # CPTP / unitality / unitarity checks on computed channels
    channel: float = 1e-8
    # diagonality of Lindblad data and separation of decay rates
    lindblad: float = 1e-8
    # probability vectors: negatives above -prob_neg are clamped to 0
    prob_neg: float = 1e-12
    prob_sum: float = 1e-10
    # entries below this count as exact zeros in entropies
    zero_prob: float = 1e-14
    # subentropy nodes closer than this are merged (confluent handling)
    node_merge: float = 1e-9
    # below this gap the distinct-node table is evaluated in extended precision
    node_extended: float = 1e-6
    # column-stochasticity
    stochastic: float = 1e-8
    bistochastic: float = 1e-9


TOL = Tolerances()

DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 42
# samples per independent RNG substream; fixed so results never depend on threading
BLOCK_SIZE = 4096


def max_threads() -> int:
    """Thread cap from ``CGP_THREADS`` (defaults to the CPU count)."""
    raw = os.environ.get("CGP_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
