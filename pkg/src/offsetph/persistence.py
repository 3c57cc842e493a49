"""Vietoris-Rips and Cech filtrations, GF(2) persistence and barcodes.

The filtration parameter is the BALL RADIUS throughout: two points are joined
once their radius-r balls meet, i.e. at r = distance / 2. A Cech simplex enters
at the radius of the minimal enclosing ball of its vertices.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .sampling import PointCloud

INF = math.inf


class NonMonotoneError(ValueError):
    """Some face enters the filtration after one of its cofaces."""


class NoQualifyingPointError(RuntimeError):
    pass


@dataclass
class FilteredComplex:
    """Simplices grouped by dimension.

    ``simplices[k]`` is an ``(m, k+1)`` integer array of sorted vertex tuples and
    ``radii[k]`` the matching filtration values; each dimension is ordered by
    (radius, lexicographic vertex tuple), which is the global
    (radius, dim, tuple) order restricted to that dimension.
    """

    points: np.ndarray | None
    simplices: list
    radii: list
    kind: str = "custom"
    hom_dim: int | None = None

    @classmethod
    def from_simplices(cls, items, points=None, kind="custom"):
        """Build from ``[(vertex tuple, radius), ...]`` without validation."""
        by_dim: dict = {}
        for verts, r in items:
            verts = tuple(sorted(verts))
            by_dim.setdefault(len(verts) - 1, []).append((verts, float(r)))
        top = max(by_dim) if by_dim else -1
        simplices, radii = [], []
        for k in range(top + 1):
            rows = by_dim.get(k, [])
            arr = np.array([v for v, _ in rows], dtype=np.int64).reshape(-1, k + 1)
            rad = np.array([r for _, r in rows], dtype=float)
            simplices.append(arr)
            radii.append(rad)
        return cls(points, *_sort_dims(simplices, radii), kind=kind, hom_dim=max(top - 1, 0))

    @property
    def maxdim(self) -> int:
        return len(self.simplices) - 1

    def __len__(self):
        return sum(len(s) for s in self.simplices)

    def iter_simplices(self):
        """``(vertex tuple, dim, radius)`` in global filtration order."""
        entries = []
        for k, (s, r) in enumerate(zip(self.simplices, self.radii)):
            entries.extend((float(rad), k, tuple(int(v) for v in row)) for row, rad in zip(s, r))
        entries.sort()
        for rad, k, verts in entries:
            yield verts, k, rad


def _sort_dims(simplices, radii):
    out_s, out_r = [], []
    for s, r in zip(simplices, radii):
        if len(s):
            keys = [s[:, c] for c in range(s.shape[1] - 1, -1, -1)] + [r]
            order = np.lexsort(keys)
            s, r = s[order], r[order]
        out_s.append(s)
        out_r.append(r)
    return out_s, out_r


# ---------------------------------------------------------------------------
# filtrations


def _neighbors(points: np.ndarray, maxradius: float):
    n = len(points)
    if n <= 4000:
        diff = points[:, None, :] - points[None, :, :]
        D = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        adj = (D / 2 <= maxradius)
        np.fill_diagonal(adj, False)
        return D, adj
    tree = cKDTree(points)
    pairs = tree.query_pairs(2 * maxradius, output_type="ndarray")
    D = np.full((n, n), np.inf)
    adj = np.zeros((n, n), dtype=bool)
    if len(pairs):
        d = np.linalg.norm(points[pairs[:, 0]] - points[pairs[:, 1]], axis=1)
        D[pairs[:, 0], pairs[:, 1]] = D[pairs[:, 1], pairs[:, 0]] = d
        adj[pairs[:, 0], pairs[:, 1]] = adj[pairs[:, 1], pairs[:, 0]] = True
    return D, adj


def _cliques(adj: np.ndarray, maxdim: int):
    """Vertex tuples of all cliques with up to ``maxdim + 2`` vertices."""
    n = len(adj)
    out = [np.arange(n, dtype=np.int64).reshape(-1, 1)]
    if maxdim + 1 < 1:
        return out
    iu, ju = np.nonzero(np.triu(adj, 1))
    out.append(np.stack([iu, ju], axis=1).astype(np.int64))
    prev = out[-1]
    upper = np.triu(adj, 1)
    for _ in range(2, maxdim + 2):
        rows = []
        for simplex in prev:
            common = upper[simplex[-1]].copy()
            for v in simplex[:-1]:
                common &= adj[v]
            ks = np.nonzero(common)[0]
            if len(ks):
                block = np.empty((len(ks), len(simplex) + 1), dtype=np.int64)
                block[:, :-1] = simplex
                block[:, -1] = ks
                rows.append(block)
        k = prev.shape[1] + 1
        prev = np.concatenate(rows) if rows else np.zeros((0, k), dtype=np.int64)
        out.append(prev)
    return out


def _cloud_points(cloud) -> np.ndarray:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    if len(pts) == 0:
        raise ValueError("point cloud is empty")
    return np.asarray(pts, dtype=float)


def vr_filtration(cloud, maxdim: int = 1, maxradius: float = INF) -> FilteredComplex:
    """Vietoris-Rips: a simplex enters at half its largest pairwise distance."""
    if not 0 <= maxdim <= 2:
        raise ValueError("maxdim must be 0, 1 or 2")
    pts = _cloud_points(cloud)
    D, adj = _neighbors(pts, maxradius)
    cl = _cliques(adj, maxdim)
    radii = [np.zeros(len(pts))]
    for s in cl[1:]:
        r = np.zeros(len(s))
        for a, b in itertools.combinations(range(s.shape[1]), 2):
            r = np.maximum(r, D[s[:, a], s[:, b]] / 2)
        radii.append(r)
    return _finish(pts, cl, radii, maxradius, "vr", maxdim)


def _finish(pts, cl, radii, maxradius, kind, maxdim):
    keep_s, keep_r = [], []
    for s, r in zip(cl, radii):
        mask = r <= maxradius
        keep_s.append(s[mask])
        keep_r.append(r[mask])
    return FilteredComplex(pts, *_sort_dims(keep_s, keep_r), kind=kind, hom_dim=maxdim)


def _triangle_meb(P, s):
    a, b, c = P[s[:, 0]], P[s[:, 1]], P[s[:, 2]]
    u, v, w = b - a, c - a, c - b
    uu = np.einsum("ij,ij->i", u, u)
    vv = np.einsum("ij,ij->i", v, v)
    ww = np.einsum("ij,ij->i", w, w)
    uv = np.einsum("ij,ij->i", u, v)
    sides = np.stack([uu, vv, ww], axis=1)
    longest = sides.max(axis=1)
    obtuse = 2 * longest >= sides.sum(axis=1)
    cross2 = np.maximum(uu * vv - uv * uv, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        circum = np.sqrt(uu * vv * ww / (4 * cross2))
    return np.where(obtuse | (cross2 <= 0), np.sqrt(longest) / 2, circum)


def circumball(P: np.ndarray):
    """Center and radius of the smallest sphere through all points of P,
    within their affine hull; None for affinely dependent points."""
    p0 = P[0]
    A = P[1:] - p0
    G = A @ A.T
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(lam)):
        return None
    if np.linalg.cond(G) > 1e12:
        return None
    c = p0 + lam @ A
    return c, float(np.linalg.norm(P - c, axis=1).max())


def minimal_enclosing_radius(P) -> float:
    """Radius of the minimal enclosing ball of a handful of points.

    The minimal ball is the circumball of some subset of at most d+1 points
    that contains everything; all subsets are tried.
    """
    P = np.asarray(P, dtype=float)
    k, d = P.shape
    if k == 1:
        return 0.0
    best = INF
    for size in range(2, min(k, d + 1) + 1):
        for sub in itertools.combinations(range(k), size):
            cb = circumball(P[list(sub)])
            if cb is None:
                continue
            c, r = cb
            if r >= best:
                continue
            if np.all(np.linalg.norm(P - c, axis=1) <= r * (1 + 1e-12) + 1e-15):
                best = r
    return best


def meb_radii(P: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    """Minimal enclosing radii of many small point sets at once.

    Same subset search as ``minimal_enclosing_radius``, batched: every subset
    of at most d+1 vertices proposes its circumball, and the smallest one
    containing all vertices wins.
    """
    X = P[simplices]                       # (m, k, d)
    m, k, d = X.shape
    best = np.full(m, INF)
    for size in range(2, min(k, d + 1) + 1):
        for sub in itertools.combinations(range(k), size):
            Y = X[:, list(sub), :]
            A = Y[:, 1:, :] - Y[:, :1, :]
            G = A @ A.transpose(0, 2, 1)
            rhs = 0.5 * np.einsum("mij,mij->mi", A, A)
            det = np.linalg.det(G)
            scale = np.prod(np.einsum("mii->mi", G), axis=1)
            ok = np.abs(det) > 1e-12 * np.maximum(scale, 1e-300)
            G[~ok] = np.eye(size - 1)
            lam = np.linalg.solve(G, rhs[..., None])[..., 0]
            c = Y[:, 0, :] + np.einsum("mi,mij->mj", lam, A)
            dist = np.linalg.norm(X - c[:, None, :], axis=2)
            r = np.linalg.norm(Y - c[:, None, :], axis=2).max(axis=1)
            inside = np.all(dist <= r[:, None] * (1 + 1e-12) + 1e-15, axis=1)
            take = ok & inside & (r < best)
            best[take] = r[take]
    return best


def cech_filtration(cloud, maxdim: int = 1, maxradius: float = INF) -> FilteredComplex:
    """Cech: a simplex enters at the radius of its minimal enclosing ball."""
    if not 0 <= maxdim <= 2:
        raise ValueError("maxdim must be 0, 1 or 2")
    pts = _cloud_points(cloud)
    if pts.shape[1] > 3:
        raise ValueError("Cech filtration supports ambient dimension at most 3")
    D, adj = _neighbors(pts, maxradius)
    cl = _cliques(adj, maxdim)
    radii = [np.zeros(len(pts))]
    if len(cl) > 1:
        radii.append(D[cl[1][:, 0], cl[1][:, 1]] / 2)
    if len(cl) > 2:
        radii.append(_triangle_meb(pts, cl[2]) if len(cl[2]) else np.zeros(0))
    if len(cl) > 3:
        radii.append(meb_radii(pts, cl[3]) if len(cl[3]) else np.zeros(0))
    _enforce_monotone(cl, radii)
    return _finish(pts, cl, radii, maxradius, "cech", maxdim)


def _encode(s: np.ndarray, n: int) -> np.ndarray:
    key = np.zeros(len(s), dtype=np.int64)
    for c in range(s.shape[1]):
        key = key * n + s[:, c]
    return key


def _face_indices(simplices, k, n):
    """For dimension k >= 1: (m, k+1) array of face row indices in dimension k-1."""
    faces = simplices[k - 1]
    keys = _encode(faces, n)
    order = np.argsort(keys)
    skeys = keys[order]
    s = simplices[k]
    out = np.empty((len(s), k + 1), dtype=np.int64)
    for drop in range(k + 1):
        cols = [c for c in range(k + 1) if c != drop]
        fk = _encode(s[:, cols], n)
        pos = np.searchsorted(skeys, fk)
        if len(s) and (np.any(pos >= len(skeys)) or np.any(skeys[np.minimum(pos, len(skeys) - 1)] != fk)):
            raise NonMonotoneError(f"a face of a {k}-simplex is missing from the complex")
        out[:, drop] = order[pos] if len(s) else pos
    return out


def _enforce_monotone(cl, radii):
    # closed-form radii can undershoot a face by rounding; lift to the faces' max
    n = len(cl[0])
    for k in range(2, len(cl)):
        if not len(cl[k]):
            continue
        fidx = _face_indices(cl, k, n)
        radii[k] = np.maximum(radii[k], radii[k - 1][fidx].max(axis=1))


# ---------------------------------------------------------------------------
# reduction


@dataclass
class Barcode:
    intervals: list = field(default_factory=list)

    def __post_init__(self):
        self.intervals = sorted((int(d), float(b), float(e)) for d, b, e in self.intervals)

    def dim(self, k):
        return [(b, e) for d, b, e in self.intervals if d == k]

    def __len__(self):
        return len(self.intervals)

    def to_json(self) -> str:
        rows = [{"dim": d, "birth": b, "death": None if math.isinf(e) else e}
                for d, b, e in self.intervals]
        return json.dumps(rows, indent=1)

    @classmethod
    def from_json(cls, text: str) -> Barcode:
        rows = json.loads(text)
        return cls([(r["dim"], r["birth"], INF if r["death"] is None else r["death"]) for r in rows])


@numba.njit(cache=True)
def _reduce_sparse(indptr, indices, order, active, nrows):
    """GF(2) reduction of sparse columns whose pivot is the smallest row.

    Columns are visited in the sequence ``order``; inactive columns are
    skipped. Returns the pivot row of every reduced column, or -1 for columns
    that reduce to zero. Reduced pivot columns are kept sorted in one arena.
    """
    m = indptr.shape[0] - 1
    lows = np.full(m, -1, np.int64)
    owner = np.full(nrows, -1, np.int64)
    starts = np.zeros(m, np.int64)
    stops = np.zeros(m, np.int64)
    arena = np.empty(indices.shape[0] + 16, np.int64)
    used = 0
    buf = np.empty(nrows + 1, np.int64)
    tmp = np.empty(nrows + 1, np.int64)
    for j in order:
        if not active[j]:
            continue
        n = indptr[j + 1] - indptr[j]
        buf[:n] = indices[indptr[j]:indptr[j + 1]]
        buf[:n].sort()
        while n > 0:
            o = owner[buf[0]]
            if o < 0:
                break
            i = 0
            k = starts[o]
            b = stops[o]
            c = 0
            while i < n and k < b:
                x = buf[i]
                y = arena[k]
                if x < y:
                    tmp[c] = x
                    c += 1
                    i += 1
                elif y < x:
                    tmp[c] = y
                    c += 1
                    k += 1
                else:
                    i += 1
                    k += 1
            while i < n:
                tmp[c] = buf[i]
                c += 1
                i += 1
            while k < b:
                tmp[c] = arena[k]
                c += 1
                k += 1
            buf, tmp = tmp, buf
            n = c
        if n > 0:
            lows[j] = buf[0]
            owner[buf[0]] = j
            if used + n > arena.shape[0]:
                grown = np.empty(2 * (used + n), np.int64)
                grown[:used] = arena[:used]
                arena = grown
            arena[used:used + n] = buf[:n]
            starts[j] = used
            used += n
            stops[j] = used
    return lows


def _csr(rows_of_col: np.ndarray, ncols: int):
    """CSR arrays from a dense (columns x entries) index table."""
    w = rows_of_col.shape[1] if rows_of_col.ndim == 2 else 0
    indptr = np.arange(0, ncols * w + 1, w, dtype=np.int64)
    return indptr, np.ascontiguousarray(rows_of_col, dtype=np.int64).ravel()


def _transpose_csr(fidx: np.ndarray, nfaces: int):
    """Coface lists: for each face, the simplices containing it (ascending)."""
    flat = fidx.ravel()
    perm = np.argsort(flat, kind="stable")
    cof = (perm // fidx.shape[1]).astype(np.int64)
    counts = np.bincount(flat, minlength=nfaces)
    indptr = np.zeros(nfaces + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, cof


def _pair_block(fidx, nfaces, cleared, method):
    """Pivot table for one boundary block as arrays (face, simplex)."""
    m = len(fidx)
    if method == "homology":
        # pivot is the youngest face: flip row indices so it becomes the smallest
        indptr, ind = _csr(nfaces - 1 - fidx, m)
        lows = _reduce_sparse(indptr, ind, np.arange(m, dtype=np.int64),
                              np.ones(m, dtype=np.bool_), nfaces)
        neg = np.flatnonzero(lows >= 0)
        return nfaces - 1 - lows[neg], neg
    # coboundary columns of faces, youngest first; the pivot is the oldest coface
    indptr, ind = _transpose_csr(fidx, nfaces)
    order = np.arange(nfaces - 1, -1, -1, dtype=np.int64)
    lows = _reduce_sparse(indptr, ind, order, ~cleared, m)
    faces = np.flatnonzero(lows >= 0)
    return faces, lows[faces]


def compute_barcode(K: FilteredComplex, maxdim: int | None = None,
                    method: str = "cohomology") -> Barcode:
    """Persistence pairing by GF(2) matrix reduction in filtration order.

    ``method="homology"`` reduces boundary columns left to right.
    ``method="cohomology"`` reduces the anti-transposed matrix (coboundary
    columns, youngest first) and skips faces already known to be negative;
    both produce the same pairs, the second one much faster on dense
    complexes.
    """
    if method not in ("homology", "cohomology"):
        raise ValueError(f"unknown method {method!r}")
    top = K.maxdim
    if maxdim is not None:
        report = maxdim
    elif K.hom_dim is not None:
        report = K.hom_dim
    else:
        report = max(top - 1, 0)
    n = len(K.simplices[0])
    negative = [np.zeros(len(s), dtype=bool) for s in K.simplices]
    paired = [np.zeros(len(s), dtype=bool) for s in K.simplices]
    intervals = []
    for k in range(1, min(top, report + 1) + 1):
        s = K.simplices[k]
        if not len(s):
            continue
        fidx = _face_indices(K.simplices, k, n)
        r_face = K.radii[k - 1]
        r_self = K.radii[k]
        if np.any(r_face[fidx].max(axis=1) > r_self):
            raise NonMonotoneError(f"a {k}-simplex enters before one of its faces")
        faces, cols = _pair_block(fidx, len(r_face), negative[k - 1], method)
        negative[k][cols] = True
        paired[k - 1][faces] = True
        if k - 1 <= report:
            b = r_face[faces]
            d = r_self[cols]
            keep = d > b
            intervals.extend((k - 1, float(x), float(y)) for x, y in zip(b[keep], d[keep]))
    for k in range(0, min(report, top) + 1):
        ess = ~negative[k] & ~paired[k]
        for b in K.radii[k][ess]:
            intervals.append((k, float(b), INF))
    return Barcode(intervals)


def betti_at(B: Barcode, dim: int, interval) -> int:
    """Bars of dimension ``dim`` alive over all of ``[a, b]``."""
    a, b = interval
    if a > b:
        raise ValueError("need a <= b")
    return sum(1 for d, s, e in B.intervals if d == dim and s <= a and e > b)


# ---------------------------------------------------------------------------
# death centers


def locate_death_center(cloud, death: float, h: float, margin: float | None = None):
    """Grid witness for the center of a top-dimensional hole dying at ``death``.

    Among grid points whose distance to the cloud is within ``h`` of ``death``
    and which lie in a bounded component of the complement of the
    radius-(death - h) offset, return the one farthest from the cloud, as
    ``(point, distance)``.
    """
    pts = _cloud_points(cloud)
    if pts.shape[1] != 2:
        raise ValueError("death centers are located for planar clouds only")
    if not math.isfinite(death):
        raise NoQualifyingPointError("interval never dies")
    margin = 2 * h if margin is None else margin
    lo = pts.min(axis=0) - margin
    hi = pts.max(axis=0) + margin
    xs = np.arange(math.floor(lo[0] / h), math.ceil(hi[0] / h) + 1) * h
    ys = np.arange(math.floor(lo[1] / h), math.ceil(hi[1] / h) + 1) * h
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    grid = np.stack([X.ravel(), Y.ravel()], axis=1)
    dist, _ = cKDTree(pts).query(grid)
    dist = dist.reshape(X.shape)
    outside = dist > death - h
    labels, count = ndimage.label(outside)
    border = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])))
    bounded = np.isin(labels, [l for l in range(1, count + 1) if l not in border])
    ok = bounded & (np.abs(dist - death) <= h)
    if not ok.any():
        raise NoQualifyingPointError("no grid point qualifies; refine the grid")
    masked = np.where(ok, dist, -np.inf)
    i, j = np.unravel_index(np.argmax(masked), masked.shape)
    return np.array([xs[i], ys[j]]), float(dist[i, j])
