"""Field files and CSV output.

A field file is one JSON header line followed by the samples as
little-endian float64 pairs ``(re, im)`` in row-major order::

    {"schema": 1, "domain": "xi", "grid": "uniform", "d": 1,
     "half_widths": [4.0], "points": [257], "sigma": null}

``grid`` is ``"uniform"`` for closed uniform grids and ``"chebyshev"`` for
Gauss-Chebyshev node samples (``half_widths`` then holds ``r`` and
``points`` holds ``M`` per axis).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .chebyshev import ChebCoeffs, NodeGrid
from .fourier_grid import Field, GridSpec, SpatialField

SCHEMA = 1
_DTYPE = np.dtype("<f8")


def _write(path, header: dict, values: np.ndarray):
    payload = np.empty(values.size * 2, dtype=_DTYPE)
    flat = np.ascontiguousarray(values, dtype=complex).ravel()
    payload[0::2] = flat.real
    payload[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(payload.tobytes())


def _read(path) -> tuple[dict, np.ndarray]:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        raw = np.frombuffer(fh.read(), dtype=_DTYPE)
    if header.get("schema") != SCHEMA:
        raise ValueError(f"unsupported field file schema {header.get('schema')!r}")
    count = int(np.prod(header["points"]))
    if raw.size != 2 * count:
        raise ValueError(f"payload holds {raw.size // 2} samples, header declares {count}")
    values = (raw[0::2] + 1j * raw[1::2]).reshape(header["points"])
    return header, values


def write_field(path, f: Field | SpatialField):
    header = {
        "schema": SCHEMA,
        "domain": f.domain,
        "grid": "uniform",
        "d": f.grid.d,
        "half_widths": list(f.grid.half_width),
        "points": list(f.grid.points),
        "sigma": getattr(f, "sigma", None),
    }
    _write(path, header, f.values)


def write_nodes(path, nodes: NodeGrid, samples, sigma: float | None = None):
    header = {
        "schema": SCHEMA,
        "domain": "xi",
        "grid": "chebyshev",
        "d": nodes.d,
        "half_widths": [nodes.r] * nodes.d,
        "points": [nodes.M] * nodes.d,
        "sigma": sigma,
    }
    _write(path, header, np.asarray(samples))


def read_field(path) -> Field | SpatialField:
    header, values = _read(path)
    if header["grid"] != "uniform":
        raise ValueError(f"{path} holds {header['grid']} node samples, not a uniform-grid field")
    grid = GridSpec(tuple(header["half_widths"]), tuple(header["points"]))
    if header["domain"] == "x":
        return SpatialField(grid, values, sigma=header.get("sigma"))
    return Field(grid, values)


def read_nodes(path) -> tuple[NodeGrid, np.ndarray]:
    header, values = _read(path)
    if header["grid"] != "chebyshev":
        raise ValueError(f"{path} is not a Chebyshev node file")
    r = header["half_widths"]
    M = header["points"]
    if len(set(r)) != 1 or len(set(M)) != 1:
        raise ValueError("node files must use the same r and M on every axis")
    return NodeGrid(d=header["d"], M=M[0], r=r[0]), values


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_field_csv(path, f: Field | SpatialField):
    """Plain CSV alternative for d = 1: coordinate, re, im."""
    if f.grid.d != 1:
        raise ValueError("CSV field output is defined for d = 1 only")
    coord = "xi" if f.domain == "xi" else "x"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([coord, "re", "im"])
        for c, v in zip(f.grid.axes[0], f.values):
            w.writerow([_fmt(c), _fmt(v.real), _fmt(v.imag)])


def read_field_csv(path) -> Field | SpatialField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    coord = rows[0][0]
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    h = float(data[-1, 0])
    grid = GridSpec((h,), (data.shape[0],))
    if not np.allclose(grid.axes[0], data[:, 0], rtol=0, atol=1e-12 * h):
        raise ValueError("CSV coordinates do not form a closed symmetric uniform grid")
    values = data[:, 1] + 1j * data[:, 2]
    return SpatialField(grid, values) if coord == "x" else Field(grid, values)


def write_coeffs_csv(path_or_file, coeffs: ChebCoeffs):
    header = [f"k{j + 1}" for j in range(coeffs.d)] + ["re", "im"]

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, a in zip(coeffs.indices, coeffs.values):
            w.writerow([int(x) for x in k] + [_fmt(a.real), _fmt(a.imag)])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(Path(path_or_file), "w", newline="") as fh:
            emit(fh)
