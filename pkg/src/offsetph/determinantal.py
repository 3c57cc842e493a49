"""Additive compound matrices and the determinantal offset polynomial."""

from __future__ import annotations

import csv
import itertools
from fractions import Fraction
from math import comb

import numpy as np

from .exactpoly import UniPoly


def _square(A):
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    return n


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def additive_compound(A, r: int):
    """The r-th additive compound of a square matrix.

    Rows and columns are indexed by the r-subsets of range(n) in lexicographic
    order. Works for any numeric entry type supporting + and unary -.
    """
    n = _square(A)
    if not 1 <= r <= n:
        raise ValueError(f"r={r} out of range 1..{n}")
    subsets = list(itertools.combinations(range(n), r))
    zero = A[0][0] * 0
    out = []
    for S in subsets:
        row = []
        Sset = set(S)
        for T in subsets:
            if S == T:
                acc = zero
                for i in S:
                    acc = acc + A[i][i]
                row.append(acc)
                continue
            only_s = Sset.difference(T)
            only_t = set(T).difference(S)
            if len(only_s) != 1:
                row.append(zero)
                continue
            (i,), (j,) = only_s, only_t
            sign = (S.index(i) + T.index(j)) % 2
            row.append(-A[i][j] if sign else A[i][j])
        out.append(row)
    return out


def charpoly(A) -> list:
    """Coefficients of det(lambda*I - A), lowest degree first (Faddeev-LeVerrier)."""
    n = _square(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = matmul(A, M)
        c_prev = coeffs[n - k + 1]
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul(A, M)
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return coeffs


def determinantal_offset(U, r: int) -> UniPoly:
    """det(C_r(U U^T) - e^2 I) as a polynomial in e.

    ``U`` is n x m with n <= m and rational entries; ``C_r`` is the additive
    compound.
    """
    U = [[Fraction(x) for x in row] for row in U]
    n = len(U)
    m = len(U[0]) if n else 0
    if any(len(row) != m for row in U):
        raise ValueError("matrix is not rectangular")
    if n > m:
        raise ValueError("need n <= m")
    if not 1 <= r < n:
        raise ValueError(f"r={r} out of range 1..{n - 1}")
    W = additive_compound(matmul(U, transpose(U)), r)
    N = len(W)
    cp = charpoly(W)
    # det(W - lambda I) = (-1)^N det(lambda I - W), then lambda = e^2
    sign = -1 if N % 2 else 1
    out = [Fraction(0)] * (2 * N + 1)
    for k, c in enumerate(cp):
        out[2 * k] = sign * c
    poly = UniPoly(out)
    assert poly.degree == 2 * comb(n, r)
    return poly


def jacobi_eigenvalues(A, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted."""
    a = np.array(A, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    scale = max(np.abs(a).max(), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1)) if theta else 1.0
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def eigen_sum_check(A, r: int, tol: float) -> bool:
    """Spectrum of the r-th additive compound equals the r-fold eigenvalue sums."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = np.asarray(A, dtype=float)
    lam = jacobi_eigenvalues(A)
    compound = additive_compound(A.tolist(), r)
    mu = jacobi_eigenvalues(compound)
    sums = np.sort([sum(c) for c in itertools.combinations(lam, r)])
    return len(mu) == len(sums) and bool(np.all(np.abs(mu - sums) <= tol))


def read_matrix_csv(path) -> list:
    """Row-major rational matrix; entries may be written ``p/q``."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([Fraction(c.strip()) for c in row])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix rows have different lengths")
    return rows
