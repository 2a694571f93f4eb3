import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgp.coherence import (
    c2,
    c_rel,
    probability_vector,
    shannon_entropy,
    subentropy,
    subentropy_of_stochastic,
    von_neumann_entropy,
)
from cgp.core import ProjectorFamily, ket_bra
from cgp.montecarlo import simplex_batch

from conftest import dims, haar, random_density, seeds

# direct-formula values from 30-digit arithmetic
Q_532 = 0.24787678364229923780539534792
Q_1234 = 0.282591176873733712941234863946

PLUS = np.array([1, 1]) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)


def _distinct_node_subentropy(p):
    """Raw formula in 60-digit arithmetic (independent of the divided-difference code)."""
    with mpmath.workdps(60):
        p = [mpmath.mpf(x) for x in p]
        d = len(p)
        total = mpmath.mpf(0)
        for i in range(d):
            if p[i] == 0:
                continue
            total += p[i] ** d * mpmath.log(p[i]) / mpmath.fprod(p[i] - p[j] for j in range(d) if j != i)
        return float(-total)


def test_shannon_examples():
    assert shannon_entropy([1, 0]) == 0
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    assert shannon_entropy([0.25, 0.75]) == pytest.approx(0.5623351446188083, abs=1e-14)


def test_probability_vector_validation():
    np.testing.assert_array_equal(probability_vector([1 + 1e-13, -1e-13]), [1 + 1e-13, 0])
    with pytest.raises(ValueError):
        probability_vector([1.1, -0.1])
    with pytest.raises(ValueError):
        probability_vector([0.5, 0.6])


def test_von_neumann_examples():
    assert von_neumann_entropy(ket_bra(PLUS)) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(math.log(3), abs=1e-12)
    assert von_neumann_entropy(np.diag([0.25, 0.75])) == pytest.approx(shannon_entropy([0.25, 0.75]), abs=1e-14)


def test_subentropy_examples():
    assert subentropy([1, 0]) == 0
    assert subentropy([0.5, 0.5]) == pytest.approx(math.log(2) - 0.5, abs=1e-14)
    expected = -(0.49 * math.log(0.7) - 0.09 * math.log(0.3)) / 0.4
    assert subentropy([0.7, 0.3]) == pytest.approx(expected, abs=1e-14)
    assert subentropy([0.5, 0.3, 0.2]) == pytest.approx(Q_532, abs=1e-13)
    assert subentropy([0.1, 0.2, 0.3, 0.4]) == pytest.approx(Q_1234, abs=1e-13)


def test_subentropy_uniform_limit():
    # Q(1/d, ..., 1/d) = ln d - (H_d - 1)
    for d in range(2, 8):
        harmonic = sum(1 / k for k in range(1, d + 1))
        assert subentropy(np.full(d, 1 / d)) == pytest.approx(math.log(d) - harmonic + 1, abs=1e-12)


def test_subentropy_confluent_extrapolation():
    # the confluent value is the limit of the distinct-node formula
    limit = subentropy([0.5, 0.5])
    for eps in (1e-3, 1e-4):
        assert _distinct_node_subentropy([0.5 + eps, 0.5 - eps]) == pytest.approx(limit, abs=10 * eps**2)


@pytest.mark.parametrize("delta", [1e-3, 1e-5])
def test_subentropy_close_nodes(delta):
    p = np.array([0.4 + delta / 2, 0.4 - delta / 2, 0.2])
    raw = _distinct_node_subentropy(p)
    assert subentropy(p) == pytest.approx(raw, rel=100 * delta)
    merged = subentropy([0.4, 0.4, 0.2])
    assert abs(subentropy(p) - merged) <= 100 * delta * merged


def test_subentropy_extended_precision_path():
    p = [0.4 + 5e-8, 0.4 - 5e-8, 0.2]
    assert subentropy(p) == pytest.approx(_distinct_node_subentropy(p), abs=1e-12)


def test_subentropy_of_stochastic_examples():
    assert subentropy_of_stochastic(np.eye(3)) == 0
    assert subentropy_of_stochastic(np.full((2, 2), 0.5)) == pytest.approx(math.log(2) - 0.5, abs=1e-14)
    x = np.abs(haar(2, 3)) ** 2
    assert subentropy_of_stochastic(x) == pytest.approx(0.5 * (subentropy(x[:, 0]) + subentropy(x[:, 1])), abs=1e-13)
    with pytest.raises(ValueError):
        subentropy_of_stochastic(np.array([[0.5, 0.5], [0.6, 0.5]]))


def test_c2_examples():
    b = ProjectorFamily.computational(3)
    assert c2(b, np.diag([0.2, 0.3, 0.5])) == 0
    assert c2(ProjectorFamily.computational(2), ket_bra(PLUS)) == pytest.approx(0.5, abs=1e-15)
    assert c2(b, np.full((3, 3), 1 / 3)) == pytest.approx(2 / 3, abs=1e-15)
    e = np.eye(4)
    with pytest.raises(ValueError):
        c2(ProjectorFamily.from_blocks([[e[0], e[1]], [e[2], e[3]]]), np.eye(4) / 4)


def test_c_rel_examples():
    b = ProjectorFamily.computational(2)
    assert c_rel(b, np.diag([0.3, 0.7])) == pytest.approx(0, abs=1e-15)
    assert c_rel(b, ket_bra(PLUS)) == pytest.approx(math.log(2), abs=1e-12)
    rho = 0.9 * ket_bra(PLUS) + 0.1 * ket_bra(MINUS)
    assert c_rel(b, rho) == pytest.approx(math.log(2) - shannon_entropy([0.9, 0.1]), abs=1e-12)


def test_subentropy_bounds_on_simplex():
    rng = np.random.default_rng(11)
    for d in range(2, 7):
        for p in simplex_batch(d, 2000, rng):
            q = subentropy(p)
            assert -1e-12 <= q <= shannon_entropy(p) + 1e-12


@given(d=dims, seed=seeds)
def test_subentropy_permutation_symmetry(d, seed):
    rng = np.random.default_rng(seed)
    p = simplex_batch(d, 1, rng)[0]
    assert subentropy(rng.permutation(p)) == pytest.approx(subentropy(p), abs=1e-10)


@given(d=st.integers(2, 5), seed=seeds, incoherent=st.booleans())
def test_measures_vanish_together(d, seed, incoherent):
    rng = np.random.default_rng(seed)
    b = ProjectorFamily.from_basis(haar(d, seed))
    rho = random_density(d, rng)
    if incoherent:
        rho = sum(p @ rho @ p for p in b.projectors)
    assert (c2(b, rho) <= 1e-12) == (c_rel(b, rho) <= 1e-10)


@given(d=st.integers(2, 5), seed=seeds)
def test_c_rel_incoherent_unitary_invariance(d, seed):
    rng = np.random.default_rng(seed)
    v = haar(d, seed)
    b = ProjectorFamily.from_basis(v)
    rho = random_density(d, rng)
    u = v @ np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, d))) @ v.conj().T
    assert c_rel(b, u @ rho @ u.conj().T) == pytest.approx(c_rel(b, rho), abs=1e-10)
