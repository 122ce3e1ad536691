"""Dyadic grids, coefficient triangles, and the second-difference transform.

A path sampled at the ``2**J + 1`` dyadic points of level ``J`` maps to a
triangular family of coefficients

    c[j][k-1] = 2**(j/2) * (2*f((k - 1/2)/2**j) - f((k - 1)/2**j) - f(k/2**j))

for levels ``j = 0..J-1`` and positions ``k = 1..2**j``, together with the
boundary pair ``mu0 = f(0)`` and ``mu1 = f(1) - f(0)``.  The inverse map is
midpoint refinement: each level-``j`` cell midpoint receives the average of
its endpoints plus ``2**(-j/2) * c / 2``.

Positions are 1-based in the mathematics and 0-based in storage; the only
mapping is ``storage index = k - 1``, used consistently everywhere.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

#: Largest grid level accepted anywhere (2**30 + 1 values is the memory bound,
#: and k / 2**30 is exactly representable in binary floating point).
MAX_GRID_LEVEL = 30


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    out = np.ascontiguousarray(values, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DyadicGrid:
    """The equispaced points ``k / 2**J`` for ``k = 0..2**J``."""

    J: int
    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen_array(self.points))
        if len(self.points) != (1 << self.J) + 1:
            raise ParameterError("points", "grid must hold 2**J + 1 points")


@dataclass(frozen=True)
class DyadicPathValues:
    """Path values at each point of ``DyadicGrid(J)``."""

    J: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if not (0 <= self.J <= MAX_GRID_LEVEL):
            raise ParameterError("J", f"level must be in [0, {MAX_GRID_LEVEL}]")
        if len(self.values) != (1 << self.J) + 1:
            raise ParameterError("values", "path must hold 2**J + 1 values")
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("values", "path values must be finite")


@dataclass(frozen=True)
class CoefficientTriangle:
    """Boundary pair plus jagged per-level coefficient arrays.

    ``levels[j]`` holds the ``2**j`` coefficients of level ``j`` for
    ``j = 0..J``, stored contiguously so per-level reductions are a single
    pass.
    """

    J: int
    mu0: float
    mu1: float
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu0", float(self.mu0))
        object.__setattr__(self, "mu1", float(self.mu1))
        object.__setattr__(
            self, "levels", tuple(_frozen_array(lev) for lev in self.levels)
        )
        if not (0 <= self.J <= MAX_GRID_LEVEL):
            raise ParameterError("J", f"level must be in [0, {MAX_GRID_LEVEL}]")
        if len(self.levels) != self.J + 1:
            raise ParameterError("levels", "triangle must hold levels 0..J")
        for j, lev in enumerate(self.levels):
            if len(lev) != (1 << j):
                raise ParameterError("levels", f"level {j} must hold 2**{j} entries")
            if not np.all(np.isfinite(lev)):
                raise ParameterError("levels", f"level {j} has non-finite entries")
        if not (np.isfinite(self.mu0) and np.isfinite(self.mu1)):
            raise ParameterError("mu0/mu1", "boundary coefficients must be finite")


def dyadic_grid(J: int) -> DyadicGrid:
    """Equispaced dyadic grid of level ``J`` on [0, 1]."""
    if not (0 <= J <= MAX_GRID_LEVEL):
        raise ParameterError("J", f"level must be in [0, {MAX_GRID_LEVEL}] (got {J})")
    n = 1 << J
    points = np.arange(n + 1, dtype=np.float64) / n
    return DyadicGrid(J=J, points=points)


def extract_coefficients(path: DyadicPathValues) -> CoefficientTriangle:
    """Second-difference coefficients of a level-``J`` path.

    The finest usable second difference takes midpoints from level ``J``,
    so the result has max level ``J - 1``.  Requires ``J >= 1``.
    """
    if path.J < 1:
        raise ParameterError("path", "need level >= 1 to form second differences")
    v = path.values
    mu0 = float(v[0])
    mu1 = float(v[-1] - v[0])
    levels = []
    for j in range(path.J):
        step = 1 << (path.J - j)
        left = v[0:-1:step]
        right = v[step::step]
        mid = v[step // 2 :: step]
        levels.append((2.0 ** (0.5 * j)) * (2.0 * mid - left - right))
    return CoefficientTriangle(J=path.J - 1, mu0=mu0, mu1=mu1, levels=tuple(levels))


def reconstruct_path(coeffs: CoefficientTriangle) -> DyadicPathValues:
    """Invert :func:`extract_coefficients` by midpoint refinement.

    A triangle of max level ``J`` rebuilds a path of level ``J + 1``; the
    endpoints carry ``mu0`` and ``mu0 + mu1`` and each level-``j`` cell
    midpoint gets ``(f(left) + f(right)) / 2 + 2**(-j/2) * c / 2``.
    """
    J_out = coeffs.J + 1
    n = 1 << J_out
    v = np.zeros(n + 1, dtype=np.float64)
    v[0] = coeffs.mu0
    v[-1] = coeffs.mu0 + coeffs.mu1
    for j in range(coeffs.J + 1):
        step = 1 << (J_out - j)
        half = step // 2
        known = v[0::step]
        v[half::step] = (known[:-1] + known[1:]) / 2.0 + (
            2.0 ** (-0.5 * j) / 2.0
        ) * coeffs.levels[j]
    return DyadicPathValues(J=J_out, values=v)


def scale_triangle(coeffs: CoefficientTriangle, c: float) -> CoefficientTriangle:
    """Multiply every stored coefficient (boundary pair included) by ``c``."""
    c = float(c)
    return CoefficientTriangle(
        J=coeffs.J,
        mu0=c * coeffs.mu0,
        mu1=c * coeffs.mu1,
        levels=tuple(c * lev for lev in coeffs.levels),
    )


# ---------------------------------------------------------------------------
# Serialization.  JSON uses Python's shortest-repr floats, so a dump/load
# round trip is bit exact.  The CSV form is the flat (j, k, value) table with
# 1-based k and carries the level coefficients only.
# ---------------------------------------------------------------------------


def triangle_to_dict(coeffs: CoefficientTriangle) -> dict:
    return {
        "J": coeffs.J,
        "mu0": coeffs.mu0,
        "mu1": coeffs.mu1,
        "levels": [[float(x) for x in lev] for lev in coeffs.levels],
    }


def triangle_from_dict(data: dict) -> CoefficientTriangle:
    try:
        return CoefficientTriangle(
            J=int(data["J"]),
            mu0=float(data["mu0"]),
            mu1=float(data["mu1"]),
            levels=tuple(np.asarray(lev, dtype=np.float64) for lev in data["levels"]),
        )
    except KeyError as exc:
        raise ParameterError("coeffs", f"missing triangle field {exc}") from exc


def save_triangle_json(coeffs, path, metadata: dict | None = None) -> None:
    doc = triangle_to_dict(coeffs)
    if metadata is not None:
        doc["metadata"] = metadata
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_triangle_json(path):
    """Read a triangle file, returning ``(triangle, metadata_or_None)``."""
    with open(path) as fh:
        doc = json.load(fh)
    return triangle_from_dict(doc), doc.get("metadata")


def write_triangle_csv(coeffs: CoefficientTriangle, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "k", "value"])
        for j, lev in enumerate(coeffs.levels):
            for k0, value in enumerate(lev):
                writer.writerow([j, k0 + 1, repr(float(value))])


def read_triangle_csv(path) -> CoefficientTriangle:
    """Rebuild a triangle from the flat CSV; the boundary pair is not part
    of the CSV schema and comes back as zeros."""
    rows = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows[(int(row["j"]), int(row["k"]))] = float(row["value"])
    if not rows:
        raise ParameterError("coeffs", "empty coefficient CSV")
    J = max(j for j, _ in rows)
    levels = []
    for j in range(J + 1):
        lev = np.empty(1 << j, dtype=np.float64)
        for k in range(1, (1 << j) + 1):
            if (j, k) not in rows:
                raise ParameterError("coeffs", f"missing CSV entry (j={j}, k={k})")
            lev[k - 1] = rows[(j, k)]
        levels.append(lev)
    return CoefficientTriangle(J=J, mu0=0.0, mu1=0.0, levels=tuple(levels))


def path_to_dict(path_values: DyadicPathValues) -> dict:
    return {"J": path_values.J, "values": [float(x) for x in path_values.values]}


def path_from_dict(data: dict) -> DyadicPathValues:
    try:
        return DyadicPathValues(
            J=int(data["J"]), values=np.asarray(data["values"], dtype=np.float64)
        )
    except KeyError as exc:
        raise ParameterError("path", f"missing path field {exc}") from exc


def save_path_json(path_values, path, extra: dict | None = None) -> None:
    doc = path_to_dict(path_values)
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_path_json(path) -> DyadicPathValues:
    with open(path) as fh:
        return path_from_dict(json.load(fh))
