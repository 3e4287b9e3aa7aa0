"""Model-file container and sweep CSV output.

Models, scaled families and Stratonovich coefficients share one JSON
container with complex entries stored as two-element arrays [re, im].  The
writer renders every float with 17 significant digits, which round-trips
binary64 exactly, and emits keys in a fixed order so that write -> read ->
write is byte stable.

Sweep results go to CSV with the header line

    s_re,s_im,block_row,block_col,entry_row,entry_col,re,im,status

and one row per grid point per matrix entry ((n*m)^2 rows per point).
Points where the resolvent is singular keep their rows, with nan values and
the error name in the status column.
"""

from __future__ import annotations

import json

import numpy as np

from .adiabatic import ScaledSLHFamily
from .errors import SlhkitError
from .model import SLHModel
from .reduction import BlockPartition
from .stratonovich import StratonovichCoefficients

SWEEP_HEADER = "s_re,s_im,block_row,block_col,entry_row,entry_col,re,im,status"

_MATRIX_KEYS = {
    "slh": ("S", "L", "H"),
    "family": ("S", "L0", "L1", "H0", "H1", "H2"),
    "stratonovich": ("E00", "E0l", "El0", "Ell"),
}


class ModelFileError(SlhkitError, ValueError):
    """Structured parse error naming the offending field (and index)."""

    def __init__(self, field, message, index=None):
        self.field = field
        self.index = index
        where = f"{field}[{index}]" if index is not None else field
        super().__init__(f"{where}: {message}")


def _fmt(x: float) -> str:
    if x != x:  # nan
        return "nan"
    if x == 0.0:
        return "0"  # normalize -0.0, whose sign JSON integers cannot carry
    return f"{float(x):.17g}"


def _matrix_to_json(M: np.ndarray) -> str:
    rows = []
    for row in np.asarray(M, dtype=complex):
        cells = ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in row)
        rows.append(f"[{cells}]")
    return "[" + ",".join(rows) + "]"


def _matrix_from_json(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ModelFileError(field, "expected a nonempty list of rows")
    ncols = None
    data = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or (ncols is not None and len(row) != ncols):
            raise ModelFileError(field, "rows must be lists of equal length", index=i)
        ncols = len(row)
        out_row = []
        for j, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(v, (int, float)) for v in cell)):
                raise ModelFileError(field, "entries must be [re, im] pairs",
                                     index=(i, j))
            out_row.append(complex(cell[0], cell[1]))
        data.append(out_row)
    return np.array(data, dtype=complex)


def _object_payload(obj):
    """(kind, n_inputs, dim, matrices dict, extras dict) for a supported object."""
    if isinstance(obj, SLHModel):
        extras = {}
        if obj.basis_labels is not None:
            extras["basis_labels"] = list(obj.basis_labels)
        return ("slh", obj.n_inputs, obj.dim,
                {"S": obj.S, "L": obj.L, "H": obj.H}, extras)
    if isinstance(obj, ScaledSLHFamily):
        mats = {"S": obj.S, "L0": obj.L0, "L1": obj.L1,
                "H0": obj.H0, "H1": obj.H1, "H2": obj.H2}
        return ("family", obj.n_inputs, obj.dim, mats,
                {"slow_indices": list(obj.partition.slow_indices)})
    if isinstance(obj, StratonovichCoefficients):
        mats = {"E00": obj.E00, "E0l": obj.E0l, "El0": obj.El0, "Ell": obj.Ell}
        return ("stratonovich", obj.n_inputs, obj.dim, mats, {})
    raise ModelFileError("kind", f"unsupported object type {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical text form of a model, family, or coefficient set."""
    kind, n, m, mats, extras = _object_payload(obj)
    parts = [f'"kind":"{kind}"', f'"n_inputs":{n}', f'"dim":{m}']
    for key in _MATRIX_KEYS[kind]:
        parts.append(f'"{key}":{_matrix_to_json(mats[key])}')
    if "slow_indices" in extras:
        parts.append('"slow_indices":[' + ",".join(str(int(i)) for i in extras["slow_indices"]) + "]")
    if "basis_labels" in extras:
        parts.append('"basis_labels":' + json.dumps(extras["basis_labels"]))
    return "{" + ",".join(parts) + "}\n"


def write_model(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def loads(text: str):
    """Parse a model file; returns SLHModel, ScaledSLHFamily, or coefficients."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError("document", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFileError("document", "top level must be an object")
    kind = doc.get("kind")
    if kind not in _MATRIX_KEYS:
        raise ModelFileError("kind", f"must be one of {sorted(_MATRIX_KEYS)}, got {kind!r}")
    for field in ("n_inputs", "dim"):
        if not isinstance(doc.get(field), int) or doc[field] < 1:
            raise ModelFileError(field, "must be a positive integer")
    mats = {}
    for key in _MATRIX_KEYS[kind]:
        if key not in doc:
            raise ModelFileError(key, "matrix is missing")
        mats[key] = _matrix_from_json(doc[key], key)
    n, m = doc["n_inputs"], doc["dim"]

    def expect(key, shape):
        if mats[key].shape != shape:
            raise ModelFileError(key, f"expected shape {shape}, got {mats[key].shape}")

    if kind == "slh":
        expect("S", (n * m, n * m))
        expect("L", (n * m, m))
        expect("H", (m, m))
        labels = doc.get("basis_labels")
        if labels is not None and (not isinstance(labels, list) or len(labels) != m):
            raise ModelFileError("basis_labels", f"must list {m} labels")
        return SLHModel(S=mats["S"], L=mats["L"], H=mats["H"],
                        basis_labels=tuple(labels) if labels else None)
    if kind == "family":
        expect("S", (n * m, n * m))
        for key in ("L0", "L1"):
            expect(key, (n * m, m))
        for key in ("H0", "H1", "H2"):
            expect(key, (m, m))
        slow = doc.get("slow_indices")
        if (not isinstance(slow, list) or not slow
                or not all(isinstance(i, int) and 0 <= i < m for i in slow)):
            raise ModelFileError("slow_indices",
                                 f"must be a nonempty list of integers in [0, {m})")
        return ScaledSLHFamily(
            S=mats["S"], L0=mats["L0"], L1=mats["L1"],
            H0=mats["H0"], H1=mats["H1"], H2=mats["H2"],
            partition=BlockPartition(dim=m, slow_indices=tuple(slow)),
        )
    expect("E00", (m, m))
    expect("Ell", (n * m, n * m))
    expect("El0", (n * m, m))
    expect("E0l", (m, n * m))
    return StratonovichCoefficients(E00=mats["E00"], E0l=mats["E0l"],
                                    El0=mats["El0"], Ell=mats["Ell"])


def read_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# Sweep CSV.
# ---------------------------------------------------------------------------


def from_sweep_result(sweep_result):
    """(s_values, matrices, statuses) columns from a SweepResult."""
    failed = {}
    for point, msg in sweep_result.failures:
        failed[float(point)] = msg.replace(",", ";").replace("\n", " ")
    s_values = list(sweep_result.grid.s_values())
    matrices = [v.data if v is not None else None for v in sweep_result.values]
    statuses = [
        "ok" if v is not None else failed.get(float(point), "singular")
        for point, v in zip(sweep_result.grid.points, sweep_result.values)
    ]
    return s_values, matrices, statuses


def sweep_rows(s_values, matrices, statuses, n_inputs: int, dim: int):
    """Yield CSV data rows (point order, then block row/col, entry row/col)."""
    for s, value, status in zip(s_values, matrices, statuses):
        s = complex(s)
        status = status.replace(",", ";").replace("\n", " ")
        for br in range(n_inputs):
            for bc in range(n_inputs):
                for er in range(dim):
                    for ec in range(dim):
                        if value is None:
                            re = im = float("nan")
                        else:
                            z = value[br * dim + er, bc * dim + ec]
                            re, im = z.real, z.imag
                        yield (f"{_fmt(s.real)},{_fmt(s.imag)},{br},{bc},"
                               f"{er},{ec},{_fmt(re)},{_fmt(im)},{status}")


def write_sweep_csv(path, s_values, matrices, statuses,
                    n_inputs: int, dim: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for row in sweep_rows(s_values, matrices, statuses, n_inputs, dim):
            fh.write(row + "\n")
