"""Real point samples of plane curves by exact root isolation along grid slices."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from ._io import write_atomic
from .exactpoly import MPoly, isolate_real_roots


@dataclass
class Window:
    intervals: tuple

    def __post_init__(self):
        self.intervals = tuple((Fraction(a), Fraction(b)) for a, b in self.intervals)
        for a, b in self.intervals:
            if a > b:
                raise ValueError(f"empty interval [{a}, {b}]")

    @classmethod
    def square(cls, lo, hi, dim=2):
        return cls(tuple((lo, hi) for _ in range(dim)))


@dataclass
class PointCloud:
    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(0, 0) if pts.size == 0 else pts.reshape(1, -1)
        self.points = pts

    @property
    def dim(self) -> int:
        return self.points.shape[1] if self.points.ndim == 2 else 0

    def __len__(self):
        return len(self.points)

    @classmethod
    def empty(cls, dim, provenance=None):
        return cls(np.zeros((0, dim)), provenance or {})


def _slice_values(a: Fraction, b: Fraction, slices: int):
    if slices == 1:
        return [(a + b) / 2]
    step = (b - a) / (slices - 1)
    return [a + k * step for k in range(slices)]


def _tol_fraction(tol: float) -> Fraction:
    return Fraction(tol).limit_denominator(10**18) if tol > 0 else Fraction(1, 10**12)


def _slice_roots(f: MPoly, fixed: str, value: Fraction, free: str, lo, hi, tol: Fraction):
    u = f.evaluate({fixed: value}).to_univariate(free)
    if u.degree < 1:
        return []
    # roots in (lo, hi] plus a possible root exactly at lo
    out = [(a + b) / 2 for a, b in isolate_real_roots(u, tol, lo, hi)]
    if u(lo) == 0:
        out.insert(0, lo)
    return out


def lipschitz_bound(f: MPoly, w: Window) -> float:
    """Bound on |grad f| (Euclidean) over the window."""
    M = [max(abs(a), abs(b)) for a, b in w.intervals]
    total = 0.0
    for i in range(len(f.context)):
        bound = 0.0
        for m, c in f.terms.items():
            if m[i]:
                t = abs(float(c)) * m[i]
                for j, e in enumerate(m):
                    k = e - 1 if j == i else e
                    if k:
                        t *= float(M[j]) ** k
                bound += t
        total += bound ** 2
    return total ** 0.5


def dedup(points: np.ndarray, radius: float) -> np.ndarray:
    """Greedy merge keeping the first point of every cluster closer than ``radius``."""
    if len(points) == 0:
        return points
    tree = cKDTree(points)
    keep = np.ones(len(points), dtype=bool)
    for i in range(len(points)):
        if not keep[i]:
            continue
        for j in tree.query_ball_point(points[i], radius):
            if j > i:
                keep[j] = False
    return points[keep]


def sample_plane_curve(f: MPoly, w: Window, slices: int, tol: float = 1e-9) -> PointCloud:
    """Points of the real curve f = 0 inside the window.

    Both coordinate directions are sliced at ``slices`` equispaced rational
    values; roots are isolated by Sturm sequences and refined to width ``tol``.
    """
    if len(f.context) != 2:
        raise ValueError("sample_plane_curve needs a polynomial in two variables")
    if f.is_constant():
        raise ValueError("cannot sample a constant polynomial")
    if slices < 2:
        raise ValueError("need at least two slices")
    xv, yv = f.context
    (xa, xb), (ya, yb) = w.intervals
    ftol = _tol_fraction(tol)
    pts = []
    for x0 in _slice_values(xa, xb, slices):
        for y in _slice_roots(f, xv, x0, yv, ya, yb, ftol):
            pts.append((float(x0), float(y)))
    for y0 in _slice_values(ya, yb, slices):
        for x in _slice_roots(f, yv, y0, xv, xa, xb, ftol):
            pts.append((float(x), float(y0)))
    arr = np.array(pts, dtype=float).reshape(-1, 2)
    arr = dedup(arr, 2 * tol)
    prov = {
        "poly": str(f),
        "variables": list(f.context),
        "window": [[str(a), str(b)] for a, b in w.intervals],
        "slices": slices,
        "tol": tol,
        "lipschitz": lipschitz_bound(f, w),
    }
    return PointCloud(arr, prov)


def sample_surface_slices(f: MPoly, w: Window, slices: int, tol: float = 1e-9) -> PointCloud:
    """Axis-aligned slicing of a surface in three variables: every line parallel
    to one axis through a grid of the other two is intersected with f = 0."""
    if len(f.context) != 3:
        raise ValueError("need a polynomial in three variables")
    ftol = _tol_fraction(tol)
    names = f.context
    grids = [_slice_values(a, b, slices) for a, b in w.intervals]
    pts = []
    for free in range(3):
        fixed = [k for k in range(3) if k != free]
        lo, hi = w.intervals[free]
        for v0 in grids[fixed[0]]:
            g = f.evaluate({names[fixed[0]]: v0})
            for v1 in grids[fixed[1]]:
                u = g.evaluate({names[fixed[1]]: v1}).to_univariate(names[free])
                if u.degree < 1:
                    continue
                roots = [(a + b) / 2 for a, b in isolate_real_roots(u, ftol, lo, hi)]
                for r in roots:
                    p = [0.0, 0.0, 0.0]
                    p[fixed[0]], p[fixed[1]], p[free] = float(v0), float(v1), float(r)
                    pts.append(p)
    arr = dedup(np.array(pts, dtype=float).reshape(-1, 3), 2 * tol)
    return PointCloud(arr, {"poly": str(f), "slices": slices, "tol": tol})


def write_cloud(cloud: PointCloud, path) -> None:
    """CSV with a ``dim=<n>`` header; written atomically."""
    lines = [f"dim={cloud.dim}"]
    lines += [",".join(repr(float(x)) for x in p) for p in cloud.points]
    write_atomic(path, "\n".join(lines) + "\n")


class CloudFormatError(ValueError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


def read_cloud(path) -> PointCloud:
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if not header.startswith("dim="):
            raise CloudFormatError("expected header 'dim=<n>'", 1)
        try:
            dim = int(header[4:])
        except ValueError:
            raise CloudFormatError("bad dimension in header", 1) from None
        pts = []
        for lineno, row in enumerate(csv.reader(fh), start=2):
            if not row:
                continue
            if len(row) != dim:
                raise CloudFormatError(f"expected {dim} fields, found {len(row)}", lineno)
            try:
                pts.append([float(x) for x in row])
            except ValueError:
                raise CloudFormatError("non-numeric field", lineno) from None
    return PointCloud(np.array(pts, dtype=float).reshape(-1, dim), {"source": str(path)})
