"""JSON and CSV formats for matrices, projector families, generators and tables."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ProjectorFamily, as_matrix


class FormatError(ValueError):
    pass


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {"dim": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    """``{"dim": d, "re": [[...]], "im": [[...]]}``; ``im`` may be omitted."""
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed matrix: {exc}") from exc
    if re.ndim != 2 or re.shape[0] != re.shape[1] or im.shape != re.shape:
        raise FormatError("matrix must be square with matching re/im parts")
    if "dim" in obj and obj["dim"] != re.shape[0]:
        raise FormatError(f"dim {obj['dim']} does not match a {re.shape[0]}x{re.shape[0]} matrix")
    return re + 1j * im


def _vector_from_json(v) -> np.ndarray:
    if isinstance(v, dict):
        return np.asarray(v["re"], dtype=float) + 1j * np.asarray(v.get("im", [0.0] * len(v["re"])), dtype=float)
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim == 1:
        return arr.astype(complex)
    raise FormatError("vector must be {re, im}, a list of [re, im] pairs, or a real list")


def family_to_json(family: ProjectorFamily) -> dict:
    blocks = []
    for p in family.projectors:
        w, v = np.linalg.eigh(0.5 * (p + p.conj().T))
        vecs = v[:, w > 0.5]
        blocks.append([{"re": vecs[:, a].real.tolist(), "im": vecs[:, a].imag.tolist()} for a in range(vecs.shape[1])])
    return {"dim": family.dim, "blocks": blocks}


def family_from_json(obj) -> ProjectorFamily:
    """A projector family, or a maximal one from a basis-matrix object."""
    if "blocks" not in obj:
        return ProjectorFamily.from_basis(matrix_from_json(obj))
    try:
        blocks = [[_vector_from_json(v) for v in block] for block in obj["blocks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed projector family: {exc}") from exc
    family = ProjectorFamily.from_blocks(blocks)
    if "dim" in obj and obj["dim"] != family.dim:
        raise FormatError("dim does not match the vectors")
    return family


def lindbladian_to_json(h, ls: Sequence) -> dict:
    h = as_matrix(h)
    return {"dim": h.shape[0], "H": matrix_to_json(h), "Ls": [matrix_to_json(l) for l in ls]}


def lindbladian_from_json(obj) -> tuple[np.ndarray, list[np.ndarray]]:
    try:
        h = matrix_from_json(obj["H"])
        ls = [matrix_from_json(l) for l in obj.get("Ls", [])]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed Lindbladian: {exc}") from exc
    if "dim" in obj and obj["dim"] != h.shape[0]:
        raise FormatError("dim does not match H")
    return h, ls


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def format_csv(columns: Sequence[str], rows) -> str:
    """CSV text with every float written to 17 significant digits."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(x) for x in row))
    return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def write_csv(path, columns: Sequence[str], rows) -> None:
    Path(path).write_text(format_csv(columns, rows))
