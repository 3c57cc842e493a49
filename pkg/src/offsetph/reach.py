"""Reach estimates from samples with normals, and the NSW sample-size bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exactpoly import MPoly

DELTA_FLOOR = 1e-9


class ReachError(ValueError):
    pass


@dataclass
class ReachEstimate:
    tau_hat: float
    u: np.ndarray | None
    v: np.ndarray | None
    delta: float
    pairs_used: int

    @property
    def finite(self) -> bool:
        return math.isfinite(self.tau_hat)


def eval_many(p: MPoly, points: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial at many float points at once."""
    points = np.asarray(points, dtype=float)
    out = np.zeros(len(points))
    for m, c in p.terms.items():
        t = np.full(len(points), float(c))
        for j, e in enumerate(m):
            if e:
                t *= points[:, j] ** e
        out += t
    return out


def polynomial_jacobians(gens, points) -> np.ndarray:
    """Float Jacobians (points x generators x variables) of a polynomial system."""
    gens = list(gens)
    ctx = gens[0].context
    pts = np.asarray(points, dtype=float)
    J = np.empty((len(pts), len(gens), len(ctx)))
    for i, g in enumerate(gens):
        for j, x in enumerate(ctx):
            J[:, i, j] = eval_many(g.diff(x), pts)
    return J


def read_jacobian_csv(path, npoints: int, dim: int) -> np.ndarray:
    """Companion CSV: one row per point holding its Jacobian flattened row-major."""
    rows = np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))
    if rows.shape[0] != npoints:
        raise ReachError(f"expected {npoints} Jacobian rows, found {rows.shape[0]}")
    if rows.shape[1] % dim:
        raise ReachError(f"Jacobian row length {rows.shape[1]} is not a multiple of {dim}")
    return rows.reshape(npoints, rows.shape[1] // dim, dim)


def normal_bases(jac: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal normal-space bases (points x c x n) by Gram-Schmidt on the rows.

    Rows that are dependent on earlier ones come out as zero vectors, which
    contribute nothing to the projection.
    """
    jac = np.asarray(jac, dtype=float)
    N, c, n = jac.shape
    out = np.zeros_like(jac)
    for i in range(c):
        w = jac[:, i, :].copy()
        scale = np.linalg.norm(w, axis=1)
        for j in range(i):
            w -= np.sum(w * out[:, j, :], axis=1, keepdims=True) * out[:, j, :]
        norm = np.linalg.norm(w, axis=1)
        ok = norm > rtol * np.maximum(scale, 1e-300)
        out[ok, i, :] = w[ok] / norm[ok, None]
    dead = ~np.any(out != 0, axis=(1, 2))
    if np.any(dead):
        k = int(np.flatnonzero(dead)[0])
        raise ReachError(f"degenerate Jacobian at point {k}")
    return out


def federer_reach(cloud, jacobians, delta_floor: float = DELTA_FLOOR,
                  chunk: int = 2_000_000) -> ReachEstimate:
    """min over ordered pairs u != v of |u - v|^2 / (2 delta), where delta is the
    length of the projection of u - v onto the normal space at v.

    Pairs with delta <= delta_floor are skipped. If every pair is skipped the
    sample looks flat and the estimate is +inf.
    """
    P = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if P.ndim != 2 or len(P) < 2:
        raise ReachError("need at least two points")
    if delta_floor < 0:
        raise ReachError("delta_floor must be non-negative")
    nb = normal_bases(jacobians)
    if nb.shape[0] != len(P) or nb.shape[2] != P.shape[1]:
        raise ReachError("Jacobians do not match the cloud")
    N = len(P)
    rows = max(1, chunk // (N * nb.shape[1]))
    best = (math.inf, -1, -1, 0.0)
    used = 0
    for a in range(0, N, rows):
        b = min(N, a + rows)
        D = P[a:b, None, :] - P[None, :, :]          # u - v, u in chunk
        proj = np.einsum("uvn,vcn->uvc", D, nb)
        delta = np.sqrt(np.sum(proj * proj, axis=2))
        sq = np.sum(D * D, axis=2)
        valid = delta > delta_floor
        idx = np.arange(a, b)
        valid[idx - a, idx] = False
        used += int(valid.sum())
        if not valid.any():
            continue
        q = np.where(valid, sq / (2 * np.where(valid, delta, 1.0)), np.inf)
        k = int(np.argmin(q))            # first minimum: lexicographic in (u, v)
        iu, iv = divmod(k, N)
        if q[iu, iv] < best[0]:
            best = (float(q[iu, iv]), a + iu, iv, float(delta[iu, iv]))
    tau, iu, iv, dl = best
    if iu < 0:
        return ReachEstimate(math.inf, None, None, 0.0, 0)
    return ReachEstimate(tau, P[iu].copy(), P[iv].copy(), dl, used)


# ---------------------------------------------------------------------------
# Niyogi-Smale-Weinberger


@dataclass
class NSWInput:
    tau: float
    volume: float
    k: int
    epsilon: float
    delta: float
    convention: str = "ratio"

    def __post_init__(self):
        if self.convention not in ("ratio", "as-printed"):
            raise ValueError(f"unknown convention {self.convention!r}")
        if not (self.tau > 0 and self.volume > 0 and self.epsilon > 0):
            raise ValueError("tau, volume and epsilon must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("intrinsic dimension must be a positive integer")
        if not 0 < self.delta < 1:
            raise ValueError("confidence delta must lie in (0, 1)")
        if self.convention == "ratio" and not self.epsilon < self.tau / 2:
            raise ValueError("need epsilon < tau/2")
        if self.convention == "as-printed" and not self.epsilon < 1 / (2 * self.tau):
            raise ValueError("need epsilon < 1/(2 tau)")


def ball_volume(k: int, r: float) -> float:
    return math.pi ** (k / 2) * r ** k / math.gamma(k / 2 + 1)


def _angle(x: float) -> float:
    if not 0 < x < 1:
        raise ValueError(f"arcsin argument {x} outside (0, 1)")
    return math.asin(x)


def nsw_terms(p: NSWInput):
    """(beta1, beta2) of the NSW sample bound."""
    if p.convention == "ratio":
        th1 = _angle(p.epsilon / (8 * p.tau))
        th2 = _angle(p.epsilon / (16 * p.tau))
    else:
        th1 = _angle(p.epsilon * p.tau / 8)
        th2 = _angle(p.epsilon * p.tau / 16)
    b1 = p.volume / (math.cos(th1) ** p.k * ball_volume(p.k, p.epsilon / 4))
    b2 = p.volume / (math.cos(th2) ** p.k * ball_volume(p.k, p.epsilon / 8))
    return b1, b2


def nsw_bound(p: NSWInput) -> int:
    """Sample size after which an epsilon/2-dense sample is likely: ceil(b1 (log b2 + log 1/delta)) + 1."""
    b1, b2 = nsw_terms(p)
    return math.ceil(b1 * (math.log(b2) + math.log(1 / p.delta))) + 1
