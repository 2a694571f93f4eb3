"""Monte-Carlo estimates of CGP straight from its averaging definition.

These estimators never touch the closed forms and serve as their independent
oracle. Sampling is split into fixed-size blocks; block ``b`` draws from the
substream ``SeedSequence(seed, spawn_key=(b,))``, so an estimate depends only
on ``(seed, n)`` and not on how many threads evaluate the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_forms import is_bistochastic
from .coherence import subentropy_of_stochastic
from .config import BLOCK_SIZE, DEFAULT_SAMPLES, TOL, max_threads
from .core import ProjectorFamily, as_superoperator, dagger

MEASURES = ("c2", "c_rel")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int
    target: float | None = None

    def deviation(self, other: "MCEstimate | float") -> tuple[float, float]:
        """Absolute difference and the combined standard error."""
        if isinstance(other, MCEstimate):
            return abs(self.mean - other.mean), math.hypot(self.stderr, other.stderr)
        return abs(self.mean - float(other)), self.stderr

    def agrees(self, other: "MCEstimate | float | None" = None, sigmas: float = 3.0) -> bool:
        """``|difference| <= sigmas * sigma`` against ``other`` (default: ``target``)."""
        other = self.target if other is None else other
        if other is None:
            raise ValueError("nothing to compare against")
        diff, sigma = self.deviation(other)
        # a few ulps of slack so zero-variance estimates of exact values pass
        return diff <= sigmas * sigma + 1e-14

    def to_json(self) -> dict:
        out = {"mean": self.mean, "stderr": self.stderr, "n": self.n_samples, "seed": self.seed}
        if self.target is not None:
            out["target"] = self.target
        return out


# ---------------------------------------------------------------------------
# Streams and reduction
# ---------------------------------------------------------------------------


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(block),)))


def run_blocks(
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    seed: int,
    threads: int | None = None,
    block_size: int = BLOCK_SIZE,
) -> np.ndarray:
    """Evaluate ``sampler(rng, m)`` over consecutive blocks and concatenate in order."""
    if n < 1:
        raise ValueError("need at least one sample")
    sizes = [min(block_size, n - start) for start in range(0, n, block_size)]
    threads = min(threads or max_threads(), len(sizes))

    def one(b: int) -> np.ndarray:
        return np.asarray(sampler(block_rng(seed, b), sizes[b]), dtype=float)

    if threads <= 1:
        parts = [one(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    return np.concatenate(parts)


def summarize(values: np.ndarray, seed: int, target: float | None = None) -> MCEstimate:
    values = np.asarray(values, dtype=float)
    n = values.size
    stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(float(values.mean()), stderr, n, int(seed), target)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def simplex_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` uniform points of the (d-1)-simplex: normalized i.i.d. exponentials."""
    e = rng.standard_exponential((n, d))
    return e / e.sum(axis=1, keepdims=True)


def sample_simplex(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 1:
        raise ValueError("d must be positive")
    return simplex_batch(d, 1, rng)[0]


def haar_unitary_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitaries: QR of complex Ginibre matrices with ``diag(R) > 0`` enforced."""
    z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (diag / np.abs(diag))[:, None, :]


def sample_haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 1:
        raise ValueError("d must be positive")
    return haar_unitary_batch(d, 1, rng)[0]


def haar_state_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """State vectors: first columns of Haar unitaries, shape ``(n, d)``."""
    return haar_unitary_batch(d, n, rng)[:, :, 0]


def sample_haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Rank-1 projector onto a Haar-random pure state."""
    psi = sample_haar_unitary(d, rng)[:, 0]
    return np.outer(psi, psi.conj())


# ---------------------------------------------------------------------------
# Batched coherence measures
# ---------------------------------------------------------------------------


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    p = np.where(p > TOL.zero_prob, p, 1.0)
    return -np.sum(p * np.log(p), axis=-1)


def coherence_batch(rhos: np.ndarray, family: ProjectorFamily, measure: str) -> np.ndarray:
    """Coherence of a stack of states ``(n, d, d)`` in the basis of a maximal family."""
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}")
    v = family.basis()
    in_basis = dagger(v) @ rhos @ v
    diag = np.real(np.diagonal(in_basis, axis1=-2, axis2=-1))
    if measure == "c2":
        return np.sum(np.abs(in_basis) ** 2, axis=(-2, -1)) - np.sum(diag**2, axis=-1)
    herm = 0.5 * (rhos + dagger(rhos))
    w = np.clip(np.linalg.eigvalsh(herm), 0.0, None)
    return _entropy_rows(np.clip(diag, 0.0, None)) - _entropy_rows(w)


def _apply_batch(superop, rhos: np.ndarray) -> np.ndarray:
    d = rhos.shape[-1]
    flat = rhos.reshape(rhos.shape[0], d * d) @ superop.mat.T
    return flat.reshape(-1, d, d)


def _dephase_batch(family: ProjectorFamily, rhos: np.ndarray) -> np.ndarray:
    return sum(p @ rhos @ p for p in family.projectors)


def _check(channel, family: ProjectorFamily, measure: str, n: int):
    s = as_superoperator(channel)
    if not family.is_maximal:
        raise ValueError("reference family must be maximal")
    if family.dim != s.dim:
        raise ValueError("dimension mismatch between channel and family")
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}")
    if n < 100:
        raise ValueError("use at least 100 samples")
    return s


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def cgp_mc(
    channel,
    family: ProjectorFamily,
    measure: str = "c2",
    n: int = DEFAULT_SAMPLES,
    seed: int = 42,
    threads: int | None = None,
) -> MCEstimate:
    """Average coherence of ``E(sum_i p_i P_i)`` over the uniform simplex."""
    s = _check(channel, family, measure, n)
    d = s.dim
    stacked = np.stack(family.projectors)

    def sampler(rng, m):
        p = simplex_batch(d, m, rng)
        rho_in = np.einsum("ni,ijk->njk", p, stacked)
        return coherence_batch(_apply_batch(s, rho_in), family, measure)

    return summarize(run_blocks(sampler, n, seed, threads), seed)


def cgp_mc_haar(
    channel,
    family: ProjectorFamily,
    measure: str = "c2",
    n: int = DEFAULT_SAMPLES,
    seed: int = 42,
    threads: int | None = None,
) -> MCEstimate:
    """Average coherence of ``E(D_B |psi><psi|)`` over Haar-random pure states."""
    s = _check(channel, family, measure, n)
    d = s.dim

    def sampler(rng, m):
        psi = haar_state_batch(d, m, rng)
        rho = np.einsum("ni,nj->nij", psi, psi.conj())
        return coherence_batch(_apply_batch(s, _dephase_batch(family, rho)), family, measure)

    return summarize(run_blocks(sampler, n, seed, threads), seed)


def avg_coherence_of_dephased_haar_states(
    measured: ProjectorFamily,
    dephasing: ProjectorFamily,
    measure: str = "c2",
    n: int = DEFAULT_SAMPLES,
    seed: int = 42,
    threads: int | None = None,
) -> MCEstimate:
    """Average coherence (in ``measured``) of Haar states dephased in ``dephasing``.

    Equals the CGP of the unitary channel carrying ``measured`` onto ``dephasing``.
    """
    if not (measured.is_maximal and dephasing.is_maximal):
        raise ValueError("both families must be maximal")
    if measured.dim != dephasing.dim:
        raise ValueError("dimension mismatch")
    d = measured.dim

    def sampler(rng, m):
        psi = haar_state_batch(d, m, rng)
        rho = np.einsum("ni,nj->nij", psi, psi.conj())
        return coherence_batch(_dephase_batch(dephasing, rho), measured, measure)

    return summarize(run_blocks(sampler, n, seed, threads), seed)


def harmonic_number(d: int) -> float:
    return sum(1.0 / k for k in range(1, d + 1))


def subentropy_lemma_check(
    bistochastic,
    n: int = DEFAULT_SAMPLES,
    seed: int = 42,
    threads: int | None = None,
) -> MCEstimate:
    """MC average of ``H(B p)`` over the simplex, with target ``H_d - 1 + Q(B^T)``."""
    b = np.asarray(bistochastic, dtype=float)
    if not is_bistochastic(b):
        raise ValueError("matrix is not bistochastic")
    d = b.shape[0]
    target = harmonic_number(d) - 1 + subentropy_of_stochastic(b.T)

    def sampler(rng, m):
        q = simplex_batch(d, m, rng) @ b.T
        return _entropy_rows(np.clip(q, 0.0, None))

    est = summarize(run_blocks(sampler, n, seed, threads), seed)
    return MCEstimate(est.mean, est.stderr, est.n_samples, est.seed, target)
