import numpy as np
import pytest

from cgp.attainment import (
    PhaseVector,
    build_attaining_unitary,
    certify_attainment,
    deviant_cosine,
    phase_solution,
    phase_sums,
    target_unistochastic,
    verify_phase_equations,
)
from cgp.closed_forms import cgp2_max_bound, cgp2_max_dephasing

DIMS = range(2, 14)


def test_phase_solution_examples():
    p = phase_solution(2)
    assert p.alphas[0] == pytest.approx(np.pi / 4)
    assert deviant_cosine(13) == pytest.approx(-0.9038, abs=1e-4)
    assert deviant_cosine(14) == pytest.approx(-1.0503, abs=1e-4)
    with pytest.raises(ValueError):
        phase_solution(14)
    with pytest.raises(ValueError):
        phase_solution(1)


@pytest.mark.parametrize("d", DIMS)
def test_phase_equations(d):
    assert verify_phase_equations(phase_solution(d, 0.4))


def test_phase_equations_negatives():
    assert not verify_phase_equations(PhaseVector(np.zeros(3)))
    assert not verify_phase_equations(PhaseVector(np.random.default_rng(1).uniform(0, 2 * np.pi, 4)))


@pytest.mark.parametrize("d", DIMS)
def test_attaining_unitary(d):
    u = build_attaining_unitary(phase_solution(d))
    assert np.linalg.norm(u.conj().T @ u - np.eye(d)) <= 1e-10
    x = np.abs(u) ** 2
    np.testing.assert_allclose(x, target_unistochastic(d), atol=1e-9)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(0.5 * (x + x.T))), [1 / np.sqrt(2)] * (d - 1) + [1], atol=1e-9)
    y = np.sort(np.linalg.eigvalsh(x @ x.T))
    np.testing.assert_allclose(y, [0.5] * (d - 1) + [1.0], atol=1e-8)
    # circulant: U_ij depends on (i - j) mod d only
    np.testing.assert_allclose(np.roll(u, (1, 1), axis=(0, 1)), u, atol=1e-10)


def test_qubit_unistochastic_values():
    x = np.abs(build_attaining_unitary(phase_solution(2))) ** 2
    assert x[0, 0] == pytest.approx(0.8535533905932737, abs=1e-12)
    assert x[0, 1] == pytest.approx(0.1464466094067262, abs=1e-12)


@pytest.mark.parametrize("d", DIMS)
def test_certify(d):
    cert = certify_attainment(d)
    assert cert.attained
    assert abs(cert.cgp - cgp2_max_bound(d)) <= 1e-9
    assert cert.to_json()["d"] == d


def test_certify_examples():
    assert certify_attainment(2).cgp == pytest.approx(1 / 24, abs=1e-15)
    assert certify_attainment(7).bound == pytest.approx(6 / 224)
    with pytest.raises(ValueError):
        certify_attainment(14)


@pytest.mark.parametrize("d", [3, 8, 13])
def test_phi0_and_deviant_index_irrelevant(d):
    values = [certify_attainment(d, phi0).cgp for phi0 in (0.0, 1.0, 3.0)]
    assert max(values) - min(values) <= 1e-12
    for k in range(d):
        p = phase_solution(d, 0.2, k)
        assert verify_phase_equations(p)
        assert cgp2_max_dephasing(build_attaining_unitary(p)) == pytest.approx(values[0], abs=1e-12)


def test_phase_sums_formula():
    d = 6
    p = phase_solution(d)
    phi = np.arccos(deviant_cosine(d))
    np.testing.assert_allclose(phase_sums(p), d - 2 + 2 * np.cos(phi), atol=1e-12)
