"""Closed-form coherence generating power (CGP) of unital and dephasing channels.

Throughout, ``B`` is the maximal family in which coherence is measured and a
unitary ``U`` defines the dephasing basis ``B' = {U|b_j>}``; the matrix
``X_U[i, j] = |<b_i|U|b_j>|^2`` is unistochastic.
"""

from __future__ import annotations

import numpy as np

from .coherence import subentropy_of_stochastic
from .config import TOL
from .core import (
    ProjectorFamily,
    as_superoperator,
    check_unitary,
    commutator_hs_norm,
    dagger,
    hs_norm,
)


def _maximal(family: ProjectorFamily | None, d: int) -> ProjectorFamily:
    if family is None:
        return ProjectorFamily.computational(d)
    if not family.is_maximal:
        raise ValueError("reference family must be maximal (rank-1)")
    if family.dim != d:
        raise ValueError(f"dimension mismatch: family {family.dim}, operator {d}")
    return family


def qubit_basis(theta: float, phi: float = 0.0) -> np.ndarray:
    """Unitary whose columns are the qubit basis along the Bloch direction (theta, phi)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]], dtype=complex)


def fourier_matrix(d: int) -> np.ndarray:
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def connecting_unitary(family: ProjectorFamily, target: ProjectorFamily) -> np.ndarray:
    """A unitary mapping the k-th direction of ``family`` onto the k-th of ``target``.

    Phases inside each column are arbitrary; no CGP depends on them.
    """
    if not (family.is_maximal and target.is_maximal):
        raise ValueError("both families must be maximal")
    return target.basis() @ dagger(family.basis())


def unistochastic_of(u, family: ProjectorFamily | None = None) -> np.ndarray:
    u = check_unitary(u)
    family = _maximal(family, u.shape[0])
    v = family.basis()
    return np.abs(dagger(v) @ u @ v) ** 2


def is_bistochastic(x, tol: float = TOL.bistochastic) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(
        x.min() >= -1e-12
        and np.max(np.abs(x.sum(axis=0) - 1)) <= tol
        and np.max(np.abs(x.sum(axis=1) - 1)) <= tol
    )


def cgp2_from_unistochastic(x: np.ndarray) -> np.ndarray | float:
    """``Tr[Y(I - Y)] / (d(d+1))`` with ``Y = X X^T``; accepts a stack of matrices."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    y = x @ np.swapaxes(x, -1, -2)
    tr_y = np.einsum("...ii->...", y)
    tr_y2 = np.einsum("...ij,...ji->...", y, y)
    return (tr_y - tr_y2) / (d * (d + 1))


def cgp2_max_bound(d: int) -> float:
    """``C2max(d) = (d-1) / (4d(d+1))``, the ceiling for maximal dephasing."""
    if d < 2:
        raise ValueError("bound defined for d >= 2")
    return (d - 1) / (4 * d * (d + 1))


def normalized_unital(value: float, d: int) -> float:
    """CGP over the unital maximum ``4 C2max(d)``, so that ``0 <= result <= 1``."""
    return value / (4 * cgp2_max_bound(d))


def cgp2_max_dephasing(u, family: ProjectorFamily | None = None) -> float:
    """2-norm CGP of the maximal dephasing onto ``B' = U B``."""
    return float(cgp2_from_unistochastic(unistochastic_of(u, family)))


def cgp_rel_max_dephasing(u, family: ProjectorFamily | None = None) -> float:
    """Relative-entropy CGP of maximal dephasing: ``Q(X X^T) - Q(X)``."""
    x = unistochastic_of(u, family)
    return subentropy_of_stochastic(x @ x.T) - subentropy_of_stochastic(x)


def cgp_rel_qubit_closed(theta: float) -> float:
    """Qubit relative-entropy CGP of dephasing along Bloch angle ``theta``.

    The explicit expression has a removable ``(c - s)^-2`` singularity at the
    mutually unbiased point; within ``|c - s| < 1e-4`` the subentropy form is used.
    """
    if not 0 <= theta <= np.pi:
        raise ValueError("theta must lie in [0, pi]")
    c, s = np.cos(theta / 2) ** 2, np.sin(theta / 2) ** 2
    if abs(c - s) < 1e-4:
        return cgp_rel_max_dephasing(qubit_basis(theta))
    if min(c, s) <= TOL.zero_prob:
        return 0.0

    def half(a, b):
        return (
            a * a * (a - b) * np.log(a)
            + 2 * a * a * b * b * np.log(2 * a * b)
            - 0.5 * (a * a + b * b) ** 2 * np.log(a * a + b * b)
        )

    return float((half(c, s) + half(s, c)) / (c - s) ** 2)


def cgp2_unitary(u, family: ProjectorFamily | None = None) -> float:
    """2-norm CGP of the unitary channel ``U . U^dag``: ``(d - Tr X X^T) / (d(d+1))``."""
    x = unistochastic_of(u, family)
    d = x.shape[0]
    return float((d - np.sum(x * x)) / (d * (d + 1)))


def cgp2_unital(channel, family: ProjectorFamily | None = None, tol: float = TOL.channel) -> float:
    """2-norm CGP of a unital channel from ``sum_i <E P_i, E P_i> - <D E P_i, D E P_i>``."""
    s = as_superoperator(channel)
    family = _maximal(family, s.dim)
    if not s.is_unital(tol):
        raise ValueError("channel is not unital")
    d = s.dim
    total = 0.0
    for p in family.projectors:
        out = s.apply(p)
        diag = sum(q @ out @ q for q in family.projectors)
        total += hs_norm(out) ** 2 - hs_norm(diag) ** 2
    return total / (d * (d + 1))


def cgp2_commutator(channel, family: ProjectorFamily | None = None, tol: float = TOL.channel) -> float:
    """2-norm CGP of a normal unital channel: ``||[E, D_B]||_2^2 / (2d(d+1))``."""
    s = as_superoperator(channel)
    family = _maximal(family, s.dim)
    if not s.is_normal(tol):
        raise ValueError("superoperator is not normal")
    if not s.is_unital(tol):
        raise ValueError("channel is not unital")
    d = s.dim
    return commutator_hs_norm(s, family.superoperator()) ** 2 / (2 * d * (d + 1))


def z_matrix(partial: ProjectorFamily, family: ProjectorFamily | None = None) -> np.ndarray:
    """``Z_ij = sum_k Tr(P_i Pi_k P_j Pi_k) = sum_k |<b_i|Pi_k|b_j>|^2`` (real symmetric)."""
    family = _maximal(family, partial.dim)
    v = family.basis()
    return sum(np.abs(dagger(v) @ pk @ v) ** 2 for pk in partial.projectors)


def cgp2_partial_dephasing(partial: ProjectorFamily, family: ProjectorFamily | None = None) -> float:
    """2-norm CGP of dephasing onto an arbitrary-rank family: ``Tr[Z(I - Z)] / (d(d+1))``."""
    z = z_matrix(partial, family)
    d = z.shape[0]
    return float((np.trace(z) - np.sum(z * z)) / (d * (d + 1)))


def two_qubit_families(theta1: float, theta2: float, phi1: float = 0.0, phi2: float = 0.0):
    """Product basis ``B' = {P'_ij}`` and its coarse-graining ``{P'_00 + P'_01, P'_10 + P'_11}``."""
    u = np.kron(qubit_basis(theta1, phi1), qubit_basis(theta2, phi2))
    maximal = ProjectorFamily.from_basis(u)
    partial = ProjectorFamily.from_blocks([[u[:, 0], u[:, 1]], [u[:, 2], u[:, 3]]])
    return maximal, partial

