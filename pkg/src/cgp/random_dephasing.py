"""CGP of maximal dephasing onto a Haar-random basis, viewed as a random variable.

Samples are normalized by the dephasing ceiling, ``C~ = C2 / C2max(d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.integrate
import scipy.stats

from .closed_forms import cgp2_from_unistochastic, cgp2_max_bound
from .config import DEFAULT_SEED
from .montecarlo import MCEstimate, haar_unitary_batch, run_blocks, summarize

# largest d for which C2max is known to be attained
CERTIFIED_MAX_DIM = 13


def qubit_pdf(c: float) -> float:
    """Density of ``C~`` for a Haar-random qubit dephasing basis, ``0 < c < 1``."""
    if not 0 < c < 1:
        raise ValueError("density is defined on the open interval (0, 1)")
    r = math.sqrt(1 - c)
    return (math.sqrt(1 + r) + math.sqrt(1 - r)) / math.sqrt(32 * c * (1 - c))


def qubit_cdf(c):
    """Closed-form distribution function of ``C~`` for qubits (vectorized)."""
    c = np.clip(np.asarray(c, dtype=float), 0.0, 1.0)
    r = np.sqrt(1 - c)
    return 1 + np.sqrt((1 - r) / 2) - np.sqrt((1 + r) / 2)


def _qubit_moment(power: int) -> float:
    # c = sin^2 u removes both endpoint singularities: dc = sin(2u) du
    def integrand(u):
        c = math.sin(u) ** 2
        if c <= 0 or c >= 1:
            return 0.0
        return c**power * qubit_pdf(c) * math.sin(2 * u)

    value, _ = scipy.integrate.quad(integrand, 0, math.pi / 2, epsabs=1e-12, epsrel=1e-12, limit=200)
    return value


def qubit_pdf_normalization() -> float:
    return _qubit_moment(0)


def qubit_mean() -> float:
    """``E[C~]`` for qubits by quadrature (equals 8/15)."""
    return _qubit_moment(1)


def mean_bound(d: int) -> float:
    """``M(d) = 4d[d(d+5)+2] / ((d+1)^2 (d+2)(d+3))``, an upper bound on ``E[C~]``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return 4 * d * (d * (d + 5) + 2) / ((d + 1) ** 2 * (d + 2) * (d + 3))


@dataclass(frozen=True)
class CgpSampleSet:
    dim: int
    values: np.ndarray
    seed: int
    n: int

    @property
    def upper_bound_normalization(self) -> bool:
        """True when the normalizer is only known to be an upper bound, not a maximum."""
        return self.dim > CERTIFIED_MAX_DIM

    def mean(self) -> float:
        return float(self.values.mean())

    def std(self) -> float:
        return float(self.values.std(ddof=1)) if self.n > 1 else 0.0

    def stderr(self) -> float:
        return self.std() / math.sqrt(self.n)

    def summary(self, ks: float | None = None) -> dict:
        out = {
            "d": self.dim,
            "n": self.n,
            "seed": self.seed,
            "mean": self.mean(),
            "std": self.std(),
            "M_d": mean_bound(self.dim),
            "upper_bound_normalization": self.upper_bound_normalization,
        }
        if ks is not None:
            out["ks_distance"] = ks
        return out


def _unistochastic_batch(d: int, rng: np.random.Generator, m: int) -> np.ndarray:
    return np.abs(haar_unitary_batch(d, m, rng)) ** 2


def sample_cgp(d: int, n: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> CgpSampleSet:
    """``n`` Haar draws of the normalized 2-norm CGP of maximal dephasing."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    norm = cgp2_max_bound(d)

    def sampler(rng, m):
        return cgp2_from_unistochastic(_unistochastic_batch(d, rng, m)) / norm

    values = run_blocks(sampler, n, seed, threads)
    return CgpSampleSet(d, values, int(seed), n)


def exact_first_moment_check(d: int, n: int, seed: int = DEFAULT_SEED, threads: int | None = None) -> MCEstimate:
    """MC estimate of ``E[Tr X_U X_U^T]`` with its exact value ``2d/(d+1)`` as target."""
    if d < 2:
        raise ValueError("d must be at least 2")

    def sampler(rng, m):
        x = _unistochastic_batch(d, rng, m)
        return np.sum(x * x, axis=(-2, -1))

    est = summarize(run_blocks(sampler, n, seed, threads), seed)
    return MCEstimate(est.mean, est.stderr, est.n_samples, est.seed, 2 * d / (d + 1))


def sigma1_target(d: int) -> float:
    return (4 * d + 20) / ((d + 1) * (d + 2) * (d + 3))


def sigma1_check(d: int, n: int, seed: int = DEFAULT_SEED, column: int = 0, threads: int | None = None) -> MCEstimate:
    """MC estimate of ``sum_ij |U_ik|^4 |U_jk|^4`` for one column ``k``.

    The identity holds per column; summing over ``k`` multiplies it by ``d``.
    """
    if not 0 <= column < d:
        raise ValueError("column out of range")

    def sampler(rng, m):
        x = _unistochastic_batch(d, rng, m)[:, :, column]
        return np.sum(x * x, axis=-1) ** 2

    est = summarize(run_blocks(sampler, n, seed, threads), seed)
    return MCEstimate(est.mean, est.stderr, est.n_samples, est.seed, sigma1_target(d))


class LevyResult(NamedTuple):
    empirical: float
    bound: float
    stderr: float
    threshold: float

    @property
    def holds(self) -> bool:
        return self.empirical <= self.bound + 3 * self.stderr

    def to_json(self) -> dict:
        return {
            "empirical": self.empirical,
            "bound": self.bound,
            "stderr": self.stderr,
            "threshold": self.threshold,
            "holds": self.holds,
        }


def levy_bound(d: int) -> float:
    return math.exp(-math.sqrt(d) / 640**2)


def levy_threshold(d: int) -> float:
    return d ** (-0.25) + mean_bound(d)


def levy_check(d: int, n: int, seed: int = DEFAULT_SEED, samples: CgpSampleSet | None = None) -> LevyResult:
    """Empirical ``P(C~ >= d^(-1/4) + M(d))`` against the concentration bound."""
    if samples is None:
        samples = sample_cgp(d, n, seed)
    elif samples.dim != d:
        raise ValueError("sample set has a different dimension")
    threshold = levy_threshold(d)
    p = float(np.mean(samples.values >= threshold))
    stderr = math.sqrt(p * (1 - p) / samples.n)
    return LevyResult(p, levy_bound(d), stderr, threshold)


def ks_distance(samples: CgpSampleSet) -> float:
    """Kolmogorov-Smirnov distance to the analytic qubit distribution."""
    if samples.dim != 2:
        raise ValueError("the analytic distribution is only available for d = 2")
    return float(scipy.stats.kstest(samples.values, qubit_cdf).statistic)


def histogram(values, bins: int = 50, analytic_pdf: bool = False) -> np.ndarray:
    """Rows ``(bin_left, bin_right, density[, pdf_at_centre])`` over ``[0, 1]``."""
    density, edges = np.histogram(np.asarray(values), bins=bins, range=(0.0, 1.0), density=True)
    cols = [edges[:-1], edges[1:], density]
    if analytic_pdf:
        centres = 0.5 * (edges[:-1] + edges[1:])
        cols.append(np.array([qubit_pdf(c) for c in centres]))
    return np.column_stack(cols)
