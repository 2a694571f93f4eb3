"""Maximally dephasing Lindbladians and the time dependence of their CGP."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .closed_forms import cgp2_unitary, fourier_matrix, normalized_unital
from .config import TOL
from .core import (
    Channel,
    ProjectorFamily,
    Superoperator,
    as_matrix,
    check_unitary,
    dagger,
)


class DephasingConditionError(ValueError):
    """A generator fails one of the maximal-dephasing conditions.

    ``condition`` is ``"a"`` (Hamiltonian not diagonal in the target basis),
    ``"b"`` (a Lindblad operator not diagonal) or ``"c"`` (two levels share
    every Lindblad eigenvalue, so their coherence never decays). ``index`` is
    the offending operator for (b); ``pair`` the 0-based level pair for (c).
    """

    def __init__(self, condition: str, message: str, index: int | None = None, pair: tuple[int, int] | None = None):
        super().__init__(f"condition ({condition}): {message}")
        self.condition = condition
        self.index = index
        self.pair = pair


def _operators(h, ls) -> tuple[np.ndarray, list[np.ndarray]]:
    h = as_matrix(h, "Hamiltonian")
    ls = [as_matrix(l, "Lindblad operator") for l in ls]
    if any(l.shape != h.shape for l in ls):
        raise ValueError("Hamiltonian and Lindblad operators have different dimensions")
    return h, ls


def apply_lindbladian(h, ls: Sequence, rho) -> np.ndarray:
    """``-i[H, rho] + sum_a (L rho L^dag - {L^dag L, rho}/2)``."""
    h, ls = _operators(h, ls)
    rho = as_matrix(rho, "operator")
    if rho.shape != h.shape:
        raise ValueError("operator dimension does not match the generator")
    out = -1j * (h @ rho - rho @ h)
    for l in ls:
        ldl = dagger(l) @ l
        out += l @ rho @ dagger(l) - 0.5 * (ldl @ rho + rho @ ldl)
    return out


def lindblad_superoperator(h, ls: Sequence) -> Superoperator:
    h, ls = _operators(h, ls)
    eye = np.eye(h.shape[0])
    m = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for l in ls:
        ldl = dagger(l) @ l
        m += np.kron(l, l.conj()) - 0.5 * np.kron(ldl, eye) - 0.5 * np.kron(eye, ldl.T)
    return Superoperator(m)


def _eigen_residual(a: np.ndarray, psi: np.ndarray) -> float:
    return float(np.linalg.norm(a @ psi - (psi.conj() @ a @ psi) * psi))


def is_steady_pure_state(h, ls: Sequence, psi, tol: float = TOL.lindblad) -> bool:
    """Whether ``|psi><psi|`` lies in the kernel of the generator.

    Holds iff psi is a common eigenvector of every ``L_a`` and an eigenvector
    of ``iH + (1/2) sum_a <psi|L_a|psi> L_a^dag``.
    """
    h, ls = _operators(h, ls)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1) > tol:
        raise ValueError("psi must be normalized")
    if any(_eigen_residual(l, psi) > tol for l in ls):
        return False
    g = 1j * h + 0.5 * sum((psi.conj() @ l @ psi) * dagger(l) for l in ls) if ls else 1j * h
    return _eigen_residual(g, psi) <= tol


# ---------------------------------------------------------------------------
# Validated dephasing generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DephasingLindbladian:
    """A generator diagonal in ``basis``; ``maximal`` when every coherence decays.

    ``generator`` holds ``H_V`` for generators of the form ``V rho V^dag - rho``.
    """

    hamiltonian: np.ndarray
    lindblad_ops: tuple[np.ndarray, ...]
    basis: ProjectorFamily
    energies: np.ndarray
    diag_l: np.ndarray  # shape (n_ops, d)
    maximal: bool = True
    generator: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.basis.dim

    def superoperator(self) -> Superoperator:
        return lindblad_superoperator(self.hamiltonian, self.lindblad_ops)

    def apply(self, rho) -> np.ndarray:
        return apply_lindbladian(self.hamiltonian, self.lindblad_ops, rho)


def validate_dephasing(
    h,
    ls: Sequence,
    basis: ProjectorFamily,
    require_decay: bool = True,
    tol: float = TOL.lindblad,
) -> DephasingLindbladian:
    """Check the conditions under which ``exp(L t) -> D_B'`` with ``B' = basis``.

    (a) ``H`` diagonal in ``basis``; (b) every ``L_a`` diagonal in ``basis``;
    (c) for each pair ``i != j`` some ``L_a`` separates ``(L_a)_ii`` and
    ``(L_a)_jj``. With ``require_decay=False`` a failure of (c) yields a record
    with ``maximal=False`` instead of an error.
    """
    h, ls = _operators(h, ls)
    if not basis.is_maximal:
        raise ValueError("target basis must be maximal")
    if basis.dim != h.shape[0]:
        raise ValueError("basis dimension does not match the generator")
    if np.max(np.abs(h - dagger(h))) > TOL.algebraic:
        raise ValueError("Hamiltonian is not Hermitian")
    v = basis.basis()
    d = basis.dim
    off = ~np.eye(d, dtype=bool)

    hb = dagger(v) @ h @ v
    if np.max(np.abs(hb[off]), initial=0.0) > tol:
        raise DephasingConditionError("a", "Hamiltonian is not diagonal in the target basis")
    diag_l = []
    for a, l in enumerate(ls):
        lb = dagger(v) @ l @ v
        if np.max(np.abs(lb[off]), initial=0.0) > tol:
            raise DephasingConditionError("b", f"Lindblad operator {a} is not diagonal in the target basis", index=a)
        diag_l.append(np.diag(lb))
    diag_l = np.array(diag_l, dtype=complex).reshape(len(ls), d)

    maximal = True
    for i in range(d):
        for j in range(i + 1, d):
            if not np.any(np.abs(diag_l[:, i] - diag_l[:, j]) > tol):
                if require_decay:
                    raise DephasingConditionError(
                        "c", f"levels ({i + 1}, {j + 1}) share every Lindblad eigenvalue", pair=(i, j)
                    )
                maximal = False
    return DephasingLindbladian(
        hamiltonian=h,
        lindblad_ops=tuple(ls),
        basis=basis,
        energies=np.real(np.diag(hb)).copy(),
        diag_l=diag_l,
        maximal=maximal,
    )


@dataclass(frozen=True)
class LambdaMatrix:
    """Eigenvalues ``lambda_ij`` of the generator on ``|i'><j'|`` (inverse time units)."""

    values: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def min_decay_rate(self) -> float:
        """Smallest ``|Re lambda_ij|`` over ``i != j``."""
        off = ~np.eye(self.dim, dtype=bool)
        return float(np.min(-self.values.real[off]))


def lambda_matrix(gen: DephasingLindbladian) -> LambdaMatrix:
    e = gen.energies
    lam = -1j * (e[:, None] - e[None, :])
    for l in gen.diag_l:
        lam = lam + np.outer(l, l.conj()) - 0.5 * np.abs(l)[:, None] ** 2 - 0.5 * np.abs(l)[None, :] ** 2
    np.fill_diagonal(lam, 0.0)
    return LambdaMatrix(lam)


def cgp2_time(gen: DephasingLindbladian, family: ProjectorFamily | None, t: float) -> float:
    """2-norm CGP of ``exp(L t)`` from the lambda matrix, without exponentiating.

    ``[Tr(X Lambda(t) X^T) - Tr(Y(t) Y(t)^T)] / (d(d+1))`` with
    ``Lambda_kl = exp(2 Re(lambda_kl) t)`` and
    ``Y_ij = sum_kl exp(lambda_kl t) U_il U_ik^* U_jk U_jl^*``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    d = gen.dim
    if t == 0:
        return 0.0
    if family is None:
        family = ProjectorFamily.computational(d)
    if family.dim != d or not family.is_maximal:
        raise ValueError("reference family must be maximal with matching dimension")
    u = dagger(family.basis()) @ gen.basis.basis()
    x = np.abs(u) ** 2
    lam = lambda_matrix(gen).values
    big_lambda = np.exp(2 * lam.real * t)
    w = np.einsum("ik,jk->ijk", u.conj(), u)
    y = np.einsum("ijk,kl,ijl->ij", w, np.exp(lam * t), w.conj())
    if np.max(np.abs(y.imag)) > 1e-10:
        raise ArithmeticError("Y matrix has a non-negligible imaginary part")
    y = y.real
    return float((np.trace(x @ big_lambda @ x.T) - np.sum(y * y)) / (d * (d + 1)))


def cgp2_curve(gen: DephasingLindbladian, family: ProjectorFamily | None, ts: Sequence[float]) -> np.ndarray:
    """Rows ``(t, C2, C2 / (4 C2max))``."""
    d = gen.dim
    rows = []
    for t in ts:
        c = cgp2_time(gen, family, float(t))
        rows.append((float(t), c, normalized_unital(c, d)))
    return np.array(rows)


def evolve_superoperator(gen: DephasingLindbladian, t: float) -> Superoperator:
    if t < 0:
        raise ValueError("t must be non-negative")
    return Superoperator(scipy.linalg.expm(gen.superoperator().mat * t))


def evolve_channel(gen: DephasingLindbladian, t: float, tol: float = 1e-7) -> Channel:
    """The channel ``exp(L t)``, with Kraus operators read off its Choi matrix."""
    s = evolve_superoperator(gen, t)
    if not np.all(np.isfinite(s.mat)):
        raise OverflowError("matrix exponential overflowed")
    return Channel.from_superoperator(s, tol=tol)


def saturation_time(gen: DephasingLindbladian, exponent: float = 40.0) -> float:
    """Time after which every coherence has decayed by at least ``exp(-exponent)``."""
    rate = lambda_matrix(gen).min_decay_rate()
    if rate <= 0:
        raise ValueError("generator does not dephase every coherence")
    return exponent / rate


# ---------------------------------------------------------------------------
# Generators of the form  V rho V^dag - rho
# ---------------------------------------------------------------------------


def unitary_lindbladian(h_v, basis: ProjectorFamily | None = None, require_decay: bool = True) -> DephasingLindbladian:
    """``L_V(rho) = V rho V^dag - rho`` with ``V = exp(-i H_V)`` and no Hamiltonian."""
    h_v = as_matrix(h_v, "H_V")
    if np.max(np.abs(h_v - dagger(h_v))) > TOL.algebraic:
        raise ValueError("H_V must be Hermitian")
    if basis is None:
        _, vecs = np.linalg.eigh(0.5 * (h_v + dagger(h_v)))
        basis = ProjectorFamily.from_basis(vecs)
    v = scipy.linalg.expm(-1j * h_v)
    gen = validate_dephasing(np.zeros_like(h_v), [v], basis, require_decay=require_decay)
    return DephasingLindbladian(
        hamiltonian=gen.hamiltonian,
        lindblad_ops=gen.lindblad_ops,
        basis=gen.basis,
        energies=gen.energies,
        diag_l=gen.diag_l,
        maximal=gen.maximal,
        generator=h_v,
    )


def _generator_of(gen: DephasingLindbladian) -> np.ndarray:
    if gen.generator is not None:
        return gen.generator
    if len(gen.lindblad_ops) != 1 or np.max(np.abs(gen.hamiltonian)) > TOL.algebraic:
        raise ValueError("expected H = 0 and a single unitary Lindblad operator")
    v = check_unitary(gen.lindblad_ops[0])
    # minimal-norm branch: eigenphases of V in (-pi, pi]
    w = gen.basis.basis()
    phases = np.angle(np.diag(dagger(w) @ v @ w))
    return w @ np.diag(-phases) @ dagger(w)


def recipe_mub_root(w, t_star: float, tol: float = TOL.channel) -> DephasingLindbladian:
    """Generator ``L_V`` with ``V = W^(1/t_star)`` for a non-degenerate unbiased unitary ``W``.

    Eigenphases of ``W`` are folded into ``[0, 2 pi)`` so that ``H_V >= 0`` and
    ``||H_V|| t_star < 2 pi``; then ``exp(-i H_V t_star) = W``.
    """
    w = check_unitary(w)
    d = w.shape[0]
    if t_star < 4 * np.pi:
        raise ValueError("t_star must be at least 4 pi")
    if np.max(np.abs(np.abs(w) ** 2 - 1.0 / d)) > tol:
        raise ValueError("W does not connect the basis with a mutually unbiased one")
    t, z = scipy.linalg.schur(w, output="complex")
    eig = np.diag(t)
    gaps = np.abs(eig[:, None] - eig[None, :]) + np.eye(d) * 10
    if gaps.min() <= tol:
        raise ValueError("W is degenerate")
    h = np.mod(-np.angle(eig), 2 * np.pi) / t_star
    h_v = z @ np.diag(h) @ dagger(z)
    return unitary_lindbladian(0.5 * (h_v + dagger(h_v)), ProjectorFamily.from_basis(z))


def fourier_phase_profile(d: int) -> np.ndarray:
    """``f_k = (k-1)(k-2)`` for odd ``d`` and ``(k-1)^2`` for even ``d``, ``k = 1..d``."""
    k = np.arange(1, d + 1)
    return ((k - 1) * (k - 2) if d % 2 else (k - 1) ** 2).astype(float)


def recipe_fourier_phases(d: int, theta_d: float, tol: float = 1e-9) -> tuple[DephasingLindbladian, float]:
    """Generator ``L_V`` with ``H_V = sum_k theta_k F P_k F^dag`` and its optimal time ``t_star``.

    At ``t_star = pi f_d / (d theta_d)`` the Hamiltonian flow ``exp(-i H_V t)``
    is unbiased with respect to the computational basis (a quadratic Gauss sum);
    this is verified and a ``RuntimeError`` is raised otherwise.

    For odd ``d`` the profile gives ``theta_1 = theta_2 = 0``, so ``V`` is
    degenerate and the returned record has ``maximal=False``: the long-time
    limit dephases only partially.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if not 0 < theta_d <= 0.5:
        raise ValueError("theta_d must lie in (0, 1/2]")
    f = fourier_phase_profile(d)
    theta = theta_d * f / f[-1]
    fm = fourier_matrix(d)
    h_v = fm @ np.diag(theta) @ dagger(fm)
    h_v = 0.5 * (h_v + dagger(h_v))
    t_star = np.pi * f[-1] / (d * theta_d)
    u_star = fm @ np.diag(np.exp(-1j * theta * t_star)) @ dagger(fm)
    deviation = np.max(np.abs(np.abs(u_star) ** 2 - 1.0 / d))
    if deviation > tol:
        raise RuntimeError(f"Gauss-sum identity failed: max |X - 1/d| = {deviation:.3g}")
    gen = unitary_lindbladian(h_v, ProjectorFamily.from_basis(fm), require_decay=False)
    return gen, float(t_star)


def qubit_preset(t_star: float) -> DephasingLindbladian:
    """Qubit generator with ``V = P_+ + exp(-i pi / (2 t_star)) P_-``."""
    gen, _ = recipe_fourier_phases(2, np.pi / (2 * t_star))
    return gen


# ---------------------------------------------------------------------------
# Near-optimality bounds
# ---------------------------------------------------------------------------


def lindblad_unitary_gap_bound(d: int, h_norm: float, t: float) -> float:
    """``64 d/(d-1) ||H_V||^2 t``: the Lindblad vs. Hamiltonian CGP gap bound."""
    return 64 * d / (d - 1) * h_norm**2 * t


def mub_root_bound(d: int, t_star: float) -> float:
    return 256 * np.pi**2 * d / ((d - 1) * t_star)


def fourier_bound(d: int, theta_d: float) -> float:
    return 64 * np.pi * (d - 1) * theta_d


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


def hamiltonian_cgp2(h_v, family: ProjectorFamily | None, t: float) -> float:
    """2-norm CGP of the unitary flow ``exp(-i H_V t)``."""
    return cgp2_unitary(scipy.linalg.expm(-1j * np.asarray(h_v) * t), family)


def unitary_vs_lindblad_bound_check(gen: DephasingLindbladian, family: ProjectorFamily | None, t: float) -> BoundCheck:
    """Normalized CGP gap between ``exp(L_V t)`` and ``exp(-i H_V t)``, and its bound."""
    if t < 0:
        raise ValueError("t must be non-negative")
    h_v = _generator_of(gen)
    h_norm = float(np.linalg.norm(h_v, 2))
    if h_norm > 0.5 + 1e-12:
        raise ValueError(f"||H_V|| = {h_norm:.4g} exceeds 1/2")
    d = gen.dim
    lhs = abs(normalized_unital(cgp2_time(gen, family, t), d) - normalized_unital(hamiltonian_cgp2(h_v, family, t), d))
    return BoundCheck(lhs, lindblad_unitary_gap_bound(d, h_norm, t))


def random_unitary_lindbladian(d: int, rng: np.random.Generator, h_max: float = 0.5) -> DephasingLindbladian:
    """``L_V`` with a Haar eigenbasis and eigenvalues of ``H_V`` drawn from ``[0, h_max]``."""
    from .montecarlo import sample_haar_unitary

    z = sample_haar_unitary(d, rng)
    h = rng.uniform(0.0, h_max, size=d)
    return unitary_lindbladian(z @ np.diag(h) @ dagger(z), ProjectorFamily.from_basis(z))


def random_dephasing_lindbladian(d: int, rng: np.random.Generator, n_ops: int = 2) -> DephasingLindbladian:
    """Random diagonal generator in a Haar basis (complex diagonals, random energies)."""
    from .montecarlo import sample_haar_unitary

    z = sample_haar_unitary(d, rng)
    h = z @ np.diag(rng.normal(size=d)) @ dagger(z)
    ls = [z @ np.diag(rng.normal(size=d) + 1j * rng.normal(size=d)) @ dagger(z) for _ in range(n_ops)]
    return validate_dephasing(0.5 * (h + dagger(h)), ls, ProjectorFamily.from_basis(z))


__all__ = [
    "BoundCheck",
    "DephasingConditionError",
    "DephasingLindbladian",
    "LambdaMatrix",
    "apply_lindbladian",
    "cgp2_curve",
    "cgp2_time",
    "evolve_channel",
    "evolve_superoperator",
    "qubit_preset",
    "fourier_bound",
    "hamiltonian_cgp2",
    "is_steady_pure_state",
    "lambda_matrix",
    "lindblad_superoperator",
    "lindblad_unitary_gap_bound",
    "mub_root_bound",
    "random_dephasing_lindbladian",
    "random_unitary_lindbladian",
    "recipe_fourier_phases",
    "recipe_mub_root",
    "saturation_time",
    "unitary_lindbladian",
    "unitary_vs_lindblad_bound_check",
    "validate_dephasing",
]
