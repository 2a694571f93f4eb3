"""State coherence quantifiers and the entropies they need.

All logarithms are natural.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .config import TOL
from .core import ProjectorFamily, as_matrix, check_density, dephase, hs_norm


def probability_vector(p, tol: float = TOL.prob_sum) -> np.ndarray:
    """Validate ``p`` as a point of the simplex; tiny negatives are clamped to zero."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise ValueError("probability vector must be non-empty and finite")
    if p.min() < -TOL.prob_neg:
        raise ValueError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum():.15g}")
    return np.clip(p, 0.0, None)


def _xlogx_sum(p: np.ndarray) -> float:
    p = p[p > TOL.zero_prob]
    return float(-np.sum(p * np.log(p)))


def shannon_entropy(p) -> float:
    return _xlogx_sum(probability_vector(p))


def von_neumann_entropy(rho) -> float:
    rho = check_density(rho)
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return _xlogx_sum(np.clip(w, 0.0, None))


# ---------------------------------------------------------------------------
# Subentropy
# ---------------------------------------------------------------------------


def _xn_log_derivative(x, n: int, k: int, log=math.log):
    """k-th derivative of x^n ln x, divided by k!, for k < n (zero at x = 0)."""
    if x == 0:
        return 0 * x
    # d^k/dx^k x^n ln x = n!/(n-k)! x^(n-k) (ln x + H_n - H_(n-k))
    harmonic = sum(1 / type(x)(j) for j in range(n - k + 1, n + 1)) if k else 0
    return math.comb(n, k) * x ** (n - k) * (log(x) + harmonic)


def _divided_difference(nodes: list, n: int, log=math.log):
    """Divided difference of f(x) = x^n ln x over sorted nodes (repeats allowed)."""
    m = len(nodes)
    table = [_xn_log_derivative(x, n, 0, log) for x in nodes]
    for order in range(1, m):
        new = []
        for i in range(m - order):
            lo, hi = nodes[i], nodes[i + order]
            if hi == lo:
                new.append(_xn_log_derivative(lo, n, order, log))
            else:
                new.append((table[i + 1] - table[i]) / (hi - lo))
        table = new
    return table[0]


def _merge_nodes(p: np.ndarray, tol: float) -> list[float]:
    """Sort and replace every cluster of nodes within ``tol`` by its mean."""
    xs = sorted(float(x) for x in p)
    out: list[float] = []
    cluster = [xs[0]]
    for x in xs[1:]:
        if x - cluster[-1] <= tol:
            cluster.append(x)
        else:
            out.extend([sum(cluster) / len(cluster)] * len(cluster))
            cluster = [x]
    out.extend([sum(cluster) / len(cluster)] * len(cluster))
    # exact zeros keep the derivative formula on its limit branch
    return [0.0 if x <= TOL.zero_prob else x for x in out]


def subentropy(p, merge_tol: float = TOL.node_merge) -> float:
    """Subentropy ``Q(p) = -sum_i p_i^d ln p_i / prod_{j!=i} (p_i - p_j)``.

    Evaluated as minus the divided difference of ``x^d ln x`` on the nodes
    ``p_i``; coincident nodes use derivatives (the confluent limit). Nodes that
    are distinct but closer than ``TOL.node_extended`` are handled in 50-digit
    arithmetic to avoid cancellation.
    """
    p = probability_vector(p)
    d = p.size
    if d == 1:
        return 0.0
    nodes = _merge_nodes(p, merge_tol)
    gaps = [b - a for a, b in zip(nodes, nodes[1:]) if b != a]
    if gaps and min(gaps) < TOL.node_extended:
        with mpmath.workdps(50):
            value = _divided_difference([mpmath.mpf(x) for x in nodes], d, mpmath.log)
            return float(-value)
    return float(-_divided_difference(nodes, d))


def subentropy_of_stochastic(x, tol: float = TOL.stochastic) -> float:
    """Mean subentropy of the columns of a column-stochastic matrix."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError("expected a square matrix")
    if x.min() < -tol or np.max(np.abs(x.sum(axis=0) - 1.0)) > tol:
        raise ValueError("matrix is not column-stochastic")
    cols = np.clip(x, 0.0, None)
    cols = cols / cols.sum(axis=0)
    return float(np.mean([subentropy(cols[:, j]) for j in range(x.shape[1])]))


# ---------------------------------------------------------------------------
# Coherence measures
# ---------------------------------------------------------------------------


def _require_maximal(family: ProjectorFamily, rho: np.ndarray) -> None:
    if not family.is_maximal:
        raise ValueError("coherence is measured with respect to a basis; family must be maximal")
    if family.dim != rho.shape[0]:
        raise ValueError(f"dimension mismatch: family {family.dim}, state {rho.shape[0]}")


def c2(family: ProjectorFamily, rho) -> float:
    """Hilbert-Schmidt coherence ``sum_{i!=j} |rho_ij|^2`` in the basis of ``family``."""
    rho = as_matrix(rho, "state")
    _require_maximal(family, rho)
    return hs_norm(rho - dephase(family, rho)) ** 2


def c_rel(family: ProjectorFamily, rho) -> float:
    """Relative entropy of coherence ``S(D_B rho) - S(rho)``."""
    rho = check_density(rho)
    _require_maximal(family, rho)
    populations = np.array([np.trace(p @ rho).real for p in family.projectors])
    populations = np.clip(populations, 0.0, None)
    return max(_xlogx_sum(populations / populations.sum()) - von_neumann_entropy(rho), 0.0)
