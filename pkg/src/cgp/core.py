"""Linear-algebra domain types: operators, projector families, channels and superoperators.

Operators are plain ``numpy`` complex arrays. Superoperators act on operators
vectorized in row-major order, ``vec(rho) = rho.reshape(-1)``, so that
``vec(A @ rho @ B) = kron(A, B.T) @ vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import TOL


class DimensionMismatch(ValueError):
    pass


class InvalidProjectorFamily(ValueError):
    """Raised when a projector family violates one of its invariants.

    ``invariant`` is one of ``"hermitian"``, ``"idempotent"``, ``"orthogonal"``,
    ``"complete"`` or ``"rank"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class InvalidChannel(ValueError):
    pass


class NotUnitary(ValueError):
    pass


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hs_norm(a: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(a))


def check_density(rho, tol: float = TOL.algebraic) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = as_matrix(rho, "density matrix")
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def is_unitary(u, tol: float = TOL.channel) -> bool:
    u = np.asarray(u, dtype=complex)
    return hs_norm(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def check_unitary(u, tol: float = TOL.channel) -> np.ndarray:
    u = as_matrix(u, "unitary")
    if not is_unitary(u, tol):
        raise NotUnitary(f"matrix is not unitary (||U^dag U - I||_2 = {hs_norm(dagger(u) @ u - np.eye(len(u))):.3g})")
    return u


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1)


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d)


def ket_bra(psi: np.ndarray, phi: np.ndarray | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    phi = psi if phi is None else np.asarray(phi, dtype=complex)
    return np.outer(psi, np.conj(phi))


def _require_same_dim(a: int, b: int, what: str = "operands") -> None:
    if a != b:
        raise DimensionMismatch(f"{what} have dimensions {a} and {b}")


# ---------------------------------------------------------------------------
# Superoperators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Superoperator:
    """A linear map on d x d operators, stored as its d^2 x d^2 matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        d = int(round(np.sqrt(m.shape[0])))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or d * d != m.shape[0]:
            raise ValueError(f"superoperator matrix must be d^2 x d^2, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.mat.shape[0])))

    @classmethod
    def identity(cls, d: int) -> "Superoperator":
        return cls(np.eye(d * d, dtype=complex))

    @classmethod
    def from_kraus(cls, kraus: Iterable[np.ndarray]) -> "Superoperator":
        return cls(sum(np.kron(k, np.conj(k)) for k in kraus))

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        _require_same_dim(rho.shape[0], self.dim)
        return unvec(self.mat @ vec(rho), self.dim)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        _require_same_dim(self.dim, other.dim)
        return Superoperator(self.mat @ other.mat)

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        _require_same_dim(self.dim, other.dim)
        return Superoperator(self.mat - other.mat)

    def adjoint(self) -> "Superoperator":
        return Superoperator(dagger(self.mat))

    def hs_norm(self) -> float:
        return hs_norm(self.mat)

    def is_normal(self, tol: float = TOL.channel) -> bool:
        m = self.mat
        return hs_norm(m @ dagger(m) - dagger(m) @ m) <= tol

    def is_unital(self, tol: float = TOL.channel) -> bool:
        d = self.dim
        return hs_norm(self.apply(np.eye(d)) - np.eye(d)) <= tol

    def is_trace_preserving(self, tol: float = TOL.channel) -> bool:
        # Tr(E(X)) = Tr(X) for all X  <=>  vec(I)^dag M = vec(I)^dag
        d = self.dim
        vi = vec(np.eye(d))
        return hs_norm(vi @ self.mat - vi) <= tol

    def choi(self) -> np.ndarray:
        """Choi matrix ``sum_ij |i><j| (x) E(|i><j|)``."""
        d = self.dim
        return self.mat.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)

    def kraus(self, tol: float = TOL.channel) -> list[np.ndarray]:
        """Kraus operators from the eigendecomposition of the Choi matrix."""
        d = self.dim
        j = self.choi()
        j = 0.5 * (j + dagger(j))
        w, v = np.linalg.eigh(j)
        if w.min() < -tol:
            raise InvalidChannel(f"Choi matrix has eigenvalue {w.min():.3g} < 0; map is not CP")
        return [np.sqrt(wi) * v[:, k].reshape(d, d).T for k, wi in enumerate(w) if wi > tol * 1e-2]


# ---------------------------------------------------------------------------
# Projector families
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjectorFamily:
    """A complete family of mutually orthogonal projectors ``B = {Pi_i}``.

    Rank-1 families are *maximal*. Degenerate blocks store only the projector:
    the basis inside a block is not part of the data.
    """

    projectors: tuple[np.ndarray, ...]
    tol: float = field(default=TOL.algebraic, repr=False)

    def __post_init__(self):
        ps = tuple(as_matrix(p, "projector") for p in self.projectors)
        if not ps:
            raise InvalidProjectorFamily("complete", "empty family")
        d = ps[0].shape[0]
        tol = self.tol
        for i, p in enumerate(ps):
            if p.shape[0] != d:
                raise DimensionMismatch(f"projector {i} has dimension {p.shape[0]}, expected {d}")
            if hs_norm(p - dagger(p)) > tol:
                raise InvalidProjectorFamily("hermitian", f"projector {i} is not Hermitian")
            if hs_norm(p @ p - p) > tol:
                raise InvalidProjectorFamily("idempotent", f"projector {i} is not idempotent")
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if hs_norm(ps[i] @ ps[j]) > tol:
                    raise InvalidProjectorFamily("orthogonal", f"projectors {i} and {j} are not orthogonal")
        if hs_norm(sum(ps) - np.eye(d)) > tol:
            raise InvalidProjectorFamily("complete", "projectors do not sum to the identity")
        ranks = tuple(int(round(np.trace(p).real)) for p in ps)
        if any(r < 1 for r in ranks) or sum(ranks) != d:
            raise InvalidProjectorFamily("rank", f"ranks {ranks} do not partition dimension {d}")
        object.__setattr__(self, "projectors", ps)
        object.__setattr__(self, "_ranks", ranks)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def ranks(self) -> tuple[int, ...]:
        return self._ranks

    @property
    def is_maximal(self) -> bool:
        return all(r == 1 for r in self.ranks)

    def __len__(self) -> int:
        return len(self.projectors)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[np.ndarray]], tol: float = TOL.algebraic) -> "ProjectorFamily":
        """Build ``Pi_k = sum_a |k,a><k,a|`` from blocks of orthonormal vectors."""
        projectors = []
        for block in blocks:
            vs = [np.asarray(v, dtype=complex) for v in block]
            if not vs:
                raise InvalidProjectorFamily("rank", "empty block")
            projectors.append(sum(ket_bra(v) for v in vs))
        return cls(tuple(projectors), tol=tol)

    @classmethod
    def from_basis(cls, u, tol: float = TOL.algebraic) -> "ProjectorFamily":
        """Maximal family of the columns of a unitary."""
        u = as_matrix(u, "basis matrix")
        return cls(tuple(ket_bra(u[:, k]) for k in range(u.shape[1])), tol=tol)

    @classmethod
    def computational(cls, d: int) -> "ProjectorFamily":
        return cls.from_basis(np.eye(d))

    def basis(self) -> np.ndarray:
        """Unitary whose k-th column spans the k-th rank-1 projector (phases arbitrary)."""
        if not self.is_maximal:
            raise ValueError("basis() needs a maximal (rank-1) family")
        cols = []
        for p in self.projectors:
            # any non-zero column of a rank-1 projector spans its range
            j = int(np.argmax(np.linalg.norm(p, axis=0)))
            v = p[:, j]
            cols.append(v / np.linalg.norm(v))
        return np.column_stack(cols)

    def superoperator(self) -> Superoperator:
        return Superoperator.from_kraus(self.projectors)

    def channel(self) -> "Channel":
        return Channel(self.projectors)


def dephase(family: ProjectorFamily, rho) -> np.ndarray:
    """``D_B(rho) = sum_i Pi_i rho Pi_i``."""
    rho = as_matrix(rho)
    _require_same_dim(family.dim, rho.shape[0], "family and operator")
    return sum(p @ rho @ p for p in family.projectors)


def is_same_dephasing(b1: ProjectorFamily, b2: ProjectorFamily, tol: float = TOL.channel) -> bool:
    """True iff the two families contain the same projectors (order ignored)."""
    _require_same_dim(b1.dim, b2.dim, "families")
    if len(b1) != len(b2):
        return False
    unmatched = list(b2.projectors)
    for p in b1.projectors:
        for k, q in enumerate(unmatched):
            if hs_norm(p - q) <= tol:
                del unmatched[k]
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Channel:
    """A CPTP map held as a Kraus list. Compare channels via ``superoperator``."""

    kraus: tuple[np.ndarray, ...]
    tol: float = field(default=TOL.channel, repr=False)

    def __post_init__(self):
        ks = tuple(as_matrix(k, "Kraus operator") for k in self.kraus)
        if not ks:
            raise InvalidChannel("channel needs at least one Kraus operator")
        d = ks[0].shape[0]
        if any(k.shape[0] != d for k in ks):
            raise DimensionMismatch("Kraus operators have different dimensions")
        tp = sum(dagger(k) @ k for k in ks)
        if hs_norm(tp - np.eye(d)) > self.tol:
            raise InvalidChannel(f"not trace preserving (||sum K^dag K - I||_2 = {hs_norm(tp - np.eye(d)):.3g})")
        object.__setattr__(self, "kraus", ks)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @cached_property
    def superoperator(self) -> Superoperator:
        return Superoperator.from_kraus(self.kraus)

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        _require_same_dim(rho.shape[0], self.dim)
        return sum(k @ rho @ dagger(k) for k in self.kraus)

    def compose(self, first: "Channel") -> "Channel":
        """The channel ``self o first`` (apply ``first``, then ``self``)."""
        _require_same_dim(self.dim, first.dim)
        return Channel(tuple(a @ b for a in self.kraus for b in first.kraus), tol=max(self.tol, first.tol))

    def is_unital(self, tol: float = TOL.channel) -> bool:
        return self.superoperator.is_unital(tol)

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls((np.eye(d, dtype=complex),))

    @classmethod
    def unitary(cls, u) -> "Channel":
        return cls((check_unitary(u),))

    @classmethod
    def dephasing(cls, family: ProjectorFamily) -> "Channel":
        return cls(family.projectors)

    @classmethod
    def from_superoperator(cls, s: Superoperator, tol: float = 1e-7) -> "Channel":
        return cls(tuple(s.kraus(tol)), tol=tol)


def superoperator_of(channel: Channel) -> Superoperator:
    return channel.superoperator


def as_superoperator(e) -> Superoperator:
    if isinstance(e, Superoperator):
        return e
    if isinstance(e, Channel):
        return e.superoperator
    if isinstance(e, ProjectorFamily):
        return e.superoperator()
    raise TypeError(f"cannot interpret {type(e).__name__} as a superoperator")


def commutator_hs_norm(a, b) -> float:
    """``||AB - BA||_2`` for superoperators (channels and families are accepted)."""
    a, b = as_superoperator(a), as_superoperator(b)
    _require_same_dim(a.dim, b.dim)
    return hs_norm(a.mat @ b.mat - b.mat @ a.mat)
