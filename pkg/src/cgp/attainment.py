"""Circulant unitaries whose dephasing reaches the ceiling ``C2max(d)``.

``U = W diag(exp(i alpha)) W^dag`` (``W`` the Fourier matrix) gives
``X_U = I/sqrt(2) + (1 - 1/sqrt(2)) J/d`` whenever
``sum_m exp(i(alpha_{m+r} - alpha_m)) = d/sqrt(2)`` for every ``r != 0``.
Making a single phase deviate by ``phi`` turns that sum into
``d - 2 + 2 cos(phi)``, solvable iff ``d <= 13``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_forms import cgp2_max_bound, cgp2_max_dephasing, fourier_matrix

MAX_CERTIFIABLE_DIM = 13


@dataclass(frozen=True)
class PhaseVector:
    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float).reshape(-1)
        if a.size < 2:
            raise ValueError("need at least two phases")
        object.__setattr__(self, "alphas", np.mod(a, 2 * np.pi))

    @property
    def dim(self) -> int:
        return self.alphas.size


def deviant_cosine(d: int) -> float:
    return 0.5 * (d / np.sqrt(2) - d + 2)


def phase_solution(d: int, phi0: float = 0.0, k: int = 0) -> PhaseVector:
    """All phases equal to ``phi0`` except ``alpha_k = phi0 + arccos((d/sqrt2 - d + 2)/2)``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    cos_phi = deviant_cosine(d)
    if cos_phi < -1:
        raise ValueError(f"no single-deviant solution for d = {d} (cos phi = {cos_phi:.4f})")
    if not 0 <= k < d:
        raise ValueError("deviant index out of range")
    alphas = np.full(d, float(phi0))
    alphas[k] += np.arccos(cos_phi)
    return PhaseVector(alphas)


def phase_sums(phases: PhaseVector) -> np.ndarray:
    """``sum_m exp(i(alpha_{m+r} - alpha_m))`` for ``r = 1..d-1``."""
    e = np.exp(1j * phases.alphas)
    return np.array([np.sum(np.roll(e, -r) * e.conj()) for r in range(1, phases.dim)])


def verify_phase_equations(phases: PhaseVector, tol: float = 1e-9) -> bool:
    d = phases.dim
    return bool(np.all(np.abs(phase_sums(phases) - d / np.sqrt(2)) <= tol))


def build_attaining_unitary(phases: PhaseVector) -> np.ndarray:
    w = fourier_matrix(phases.dim)
    return w @ np.diag(np.exp(1j * phases.alphas)) @ w.conj().T


def target_unistochastic(d: int) -> np.ndarray:
    return np.eye(d) / np.sqrt(2) + (1 - 1 / np.sqrt(2)) / d


@dataclass(frozen=True)
class Certificate:
    d: int
    cgp: float
    bound: float
    attained: bool
    alphas: np.ndarray

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "cgp": self.cgp,
            "bound": self.bound,
            "attained": self.attained,
            "alphas": [float(a) for a in self.alphas],
        }


def certify_attainment(d: int, phi0: float = 0.0, tol: float = 1e-9) -> Certificate:
    if not 2 <= d <= MAX_CERTIFIABLE_DIM:
        raise ValueError(f"certification is available for 2 <= d <= {MAX_CERTIFIABLE_DIM}")
    phases = phase_solution(d, phi0)
    cgp = cgp2_max_dephasing(build_attaining_unitary(phases))
    bound = cgp2_max_bound(d)
    return Certificate(d, cgp, bound, abs(cgp - bound) <= tol, phases.alphas)
