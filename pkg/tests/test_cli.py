import json

import numpy as np
import pytest

from cgp import io
from cgp.cli import main
from cgp.closed_forms import fourier_matrix, qubit_basis
from cgp.core import InvalidProjectorFamily, ProjectorFamily

from conftest import haar


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_matrix_round_trip(tmp_path):
    u = haar(3, 1)
    path = tmp_path / "u.json"
    io.write_json(path, io.matrix_to_json(u))
    np.testing.assert_array_equal(io.matrix_from_json(io.read_json(path)), u)
    with pytest.raises(io.FormatError):
        io.matrix_from_json({"dim": 3, "re": [[1, 0], [0, 1]]})
    with pytest.raises(io.FormatError):
        io.matrix_from_json({"re": [[1, 0]]})


def test_family_round_trip():
    e = np.eye(4)
    fam = ProjectorFamily.from_blocks([[e[0], (e[1] + 1j * e[2]) / np.sqrt(2)], [(e[1] - 1j * e[2]) / np.sqrt(2)], [e[3]]])
    back = io.family_from_json(json.loads(json.dumps(io.family_to_json(fam))))
    assert back.ranks == fam.ranks
    for p, q in zip(fam.projectors, back.projectors):
        np.testing.assert_allclose(p, q, atol=1e-12)
    pairs = io.family_from_json({"dim": 2, "blocks": [[[[1, 0], [0, 0]]], [[[0, 0], [1, 0]]]]})
    assert pairs.is_maximal


def test_family_invalid_names_invariant():
    with pytest.raises(InvalidProjectorFamily) as info:
        io.family_from_json({"dim": 2, "blocks": [[[1, 0]], [[1, 1]]]})
    assert info.value.invariant == "idempotent"


def test_lindbladian_round_trip():
    h, ls = np.diag([1.0, 2.0]), [np.diag([1.0, -1.0])]
    h2, ls2 = io.lindbladian_from_json(io.lindbladian_to_json(h, ls))
    np.testing.assert_array_equal(h2, h)
    np.testing.assert_array_equal(ls2[0], ls[0])


def test_csv_precision():
    text = io.format_csv(["a", "b"], [(0.1, 1 / 3), (2, True)])
    lines = text.splitlines()
    assert lines[0] == "a,b"
    assert float(lines[1].split(",")[1]) == 1 / 3
    assert lines[2] == "2,true"


def test_dephasing_command(capsys, tmp_path):
    code, rep = run_json(capsys, "dephasing", "--qubit-theta", "0.7853981634", "--measure", "c2")
    assert code == 0 and rep["schema"] == 1
    assert rep["cgp"]["c2"] == pytest.approx(1 / 24, abs=1e-12)
    code, rep = run_json(capsys, "dephasing", "--qubit-theta", "0", "--measure", "rel")
    assert rep["cgp"]["rel"] == 0
    path = tmp_path / "F3.json"
    io.write_json(path, io.matrix_to_json(fourier_matrix(3)))
    code, rep = run_json(capsys, "dephasing", "--unitary", str(path), "--measure", "both")
    assert abs(rep["cgp"]["c2"]) < 1e-15 and abs(rep["cgp"]["rel"]) < 1e-12


def test_dephasing_with_mc(capsys):
    code, rep = run_json(capsys, "dephasing", "--qubit-theta", "1.1", "--measure", "both", "--mc", "20000", "--seed", "3")
    assert code == 0 and rep["seed"] == 3
    assert rep["mc"]["c2"]["agrees"] and rep["mc"]["rel"]["agrees"]


def test_dephasing_errors(capsys, tmp_path):
    path = tmp_path / "bad.json"
    io.write_json(path, io.matrix_to_json(np.diag([1.0, 2.0])))
    code, out, err = run(capsys, "dephasing", "--unitary", str(path))
    assert code == 2 and "not unitary" in err
    path.write_text("{not json")
    assert run(capsys, "dephasing", "--unitary", str(path))[0] == 2


def test_partial_command(capsys, tmp_path):
    code, rep = run_json(capsys, "partial", "--two-qubit", str(np.pi / 4), "0.3", "--theta2-grid", "9")
    assert code == 0
    assert rep["cgp"] == pytest.approx(1 / 40, abs=1e-12)
    assert rep["theta2_variation"] <= 1e-12
    assert np.allclose(rep["Z"], np.array(rep["Z"]).T)
    fam = tmp_path / "fam.json"
    io.write_json(fam, io.family_to_json(ProjectorFamily.computational(3)))
    code, rep = run_json(capsys, "partial", "--family", str(fam))
    assert code == 0 and rep["cgp"] == pytest.approx(0, abs=1e-16)
    io.write_json(fam, {"dim": 2, "blocks": [[[1, 0]], [[0.6, 0.8]]]})
    code, out, err = run(capsys, "partial", "--family", str(fam))
    assert code == 2 and json.loads(err)["invariant"] == "orthogonal"


def test_lindblad_qubit_preset(capsys):
    code, out, err = run(capsys, "lindblad", "--recipe", "qubit-preset", "--t-star", "5", "10", "20", "--format", "csv")
    assert code == 0
    rows = np.array([line.split(",") for line in out.splitlines()[1:]], dtype=float)
    assert out.splitlines()[0] == "t_star,t,cgp2,cgp2_normalized"
    peaks = [rows[rows[:, 0] == t, 3].max() for t in (5, 10, 20)]
    assert peaks[0] < peaks[1] < peaks[2] < 1


def test_lindblad_fourier_recipe(capsys):
    code, rep = run_json(capsys, "lindblad", "--recipe", "fourier", "--dim", "4", "--theta-d", "0.001")
    assert code == 0
    assert rep["cgp2_normalized_at_t_star"] >= 1 - 64 * np.pi * 3 * 0.001
    assert rep["table"]["columns"] == ["t", "cgp2", "cgp2_normalized"]


def test_lindblad_file_and_limit(capsys, tmp_path):
    path = tmp_path / "gen.json"
    io.write_json(path, io.lindbladian_to_json(np.diag([0.5, -0.5]), [np.diag([1.0, -1.0])]))
    basis = tmp_path / "b.json"
    io.write_json(basis, io.matrix_to_json(qubit_basis(0.9)))
    code, rep = run_json(capsys, "lindblad", str(path), "--basis", str(basis), "--t-grid", "0:25:11")
    assert code == 0
    assert rep["limit"]["cgp2"] == pytest.approx(rep["limit"]["max_dephasing"], abs=1e-10)


def test_lindblad_validation_failure(capsys, tmp_path):
    path = tmp_path / "gen.json"
    io.write_json(path, io.lindbladian_to_json(np.zeros((3, 3)), [np.diag([1.0, 1.0, 0.0])]))
    code, out, err = run(capsys, "lindblad", str(path))
    assert code == 1
    failure = json.loads(out)["failures"][0]
    assert failure["condition"] == "c" and failure["pair"] == [1, 2]


def test_random_command(capsys, tmp_path):
    summary = tmp_path / "s.json"
    code, out, err = run(
        capsys, "random", "--dim", "2", "--samples", "10000", "--seed", "4", "--format", "csv", "--summary", str(summary)
    )
    assert code == 0
    assert out.splitlines()[0] == "bin_left,bin_right,density,pdf"
    rep = json.loads(summary.read_text())
    assert rep["seed"] == 4 and rep["ks_distance"] <= 0.02 and rep["mean"] <= rep["M_d"]
    code, rep8 = run_json(capsys, "random", "--dim", "8", "--samples", "2000")
    code, rep32 = run_json(capsys, "random", "--dim", "32", "--samples", "2000")
    assert rep32["std"] < rep8["std"] and rep8["mean"] <= rep8["M_d"]
    assert rep32["upper_bound_normalization"]


@pytest.mark.parametrize("d, attained", [(2, True), (13, True), (14, "unknown")])
def test_bound_command(capsys, d, attained):
    code, rep = run_json(capsys, "bound", "--dim", str(d))
    assert code == 0 and rep["attained"] == attained
    assert rep["bound"] == pytest.approx((d - 1) / (4 * d * (d + 1)))


@pytest.mark.parametrize("estimator", ["simplex", "haar", "dephased-haar"])
def test_oracle_command(capsys, estimator):
    code, rep = run_json(
        capsys, "oracle", "--qubit-theta", "0.7853981634", "--estimator", estimator, "--samples", "20000"
    )
    assert code == 0 and rep["agrees"]
    expected = 1 / 12 if estimator == "dephased-haar" else 1 / 24
    assert rep["closed_form"] == pytest.approx(expected, abs=1e-9)


def test_output_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["random", "--dim", "3", "--samples", "5000", "--seed", "9", "--format", "csv", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["oracle", "--qubit-theta", "0.5", "--samples", "3000", "-o", str(path)])
    assert a.read_bytes() == b.read_bytes()
