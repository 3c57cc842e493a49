import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offsetph.persistence import (
    Barcode,
    FilteredComplex,
    NoQualifyingPointError,
    NonMonotoneError,
    betti_at,
    cech_filtration,
    compute_barcode,
    locate_death_center,
    meb_radii,
    minimal_enclosing_radius,
    vr_filtration,
)

from persistence_oracle import brute_barcode, complex_as_list

INF = math.inf
EQ = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])


def radii_of(K):
    return {tuple(s): r for s, r in complex_as_list(K)}


def circle(n, r=1.0):
    t = 2 * np.pi * np.arange(n) / n
    return r * np.stack([np.cos(t), np.sin(t)], axis=1)


# -- filtrations ---------------------------------------------------------------


def test_vr_examples():
    K = vr_filtration(np.array([[0.0, 0.0], [2.0, 0.0]]), 1)
    assert radii_of(K)[(0, 1)] == 1.0
    R = radii_of(vr_filtration(EQ, 1))
    assert all(abs(R[s] - 0.5) < 1e-15 for s in [(0, 1), (0, 2), (1, 2), (0, 1, 2)])
    K = vr_filtration(EQ, 1, maxradius=0)
    assert len(K.simplices[0]) == 3 and all(len(s) == 0 for s in K.simplices[1:])


def test_cech_examples():
    R = radii_of(cech_filtration(EQ, 1))
    assert R[(0, 1, 2)] == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    R = radii_of(cech_filtration(np.array([[0, 0], [4, 0], [2, 0.1]]), 1))
    assert R[(0, 1, 2)] == pytest.approx(2.0, abs=1e-12)
    assert radii_of(cech_filtration(np.array([[0.0, 0.0], [2.0, 0.0]]), 1))[(0, 1)] == 1.0
    with pytest.raises(ValueError):
        cech_filtration(np.zeros((3, 4)), 1)
    with pytest.raises(ValueError):
        vr_filtration(EQ, 3)


def test_regular_tetrahedron_meb():
    T = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    assert minimal_enclosing_radius(T) == pytest.approx(math.sqrt(3))
    assert meb_radii(T, np.array([[0, 1, 2, 3]]))[0] == pytest.approx(math.sqrt(3))


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_batched_meb_matches_subset_search(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(4, 3))
    assert meb_radii(P, np.array([[0, 1, 2, 3]]))[0] == pytest.approx(
        minimal_enclosing_radius(P), rel=1e-9)
    # brute check: no point lies outside by more than rounding
    r = minimal_enclosing_radius(P)
    assert r <= np.max(np.linalg.norm(P[:, None] - P[None], axis=2)) / 2 * math.sqrt(3) + 1e-12


def test_sorted_order_and_monotone():
    rng = np.random.default_rng(1)
    K = cech_filtration(rng.random((12, 2)), 2)
    seen = {}
    prev = None
    for verts, k, r in K.iter_simplices():
        key = (r, k, verts)
        assert prev is None or key >= prev
        prev = key
        for f in range(len(verts)) if k else []:
            face = verts[:f] + verts[f + 1:]
            assert seen[face] <= r
        seen[verts] = r


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_jung_sandwich(seed, d):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(9, d))
    V = radii_of(vr_filtration(P, 2))
    C = radii_of(cech_filtration(P, 2))
    assert V.keys() == C.keys()
    for s in V:
        assert V[s] <= C[s] + 1e-12
        assert C[s] <= math.sqrt(2) * V[s] + 1e-12


# -- barcodes ------------------------------------------------------------------


def test_barcode_examples():
    B = compute_barcode(vr_filtration(np.array([[0.0, 0.0], [2.0, 0.0]]), 1))
    assert B.dim(0) == [(0.0, 1.0), (0.0, INF)]
    B = compute_barcode(cech_filtration(EQ, 1))
    (b, d), = B.dim(1)
    assert b == pytest.approx(0.5) and d == pytest.approx(1 / math.sqrt(3))
    assert compute_barcode(vr_filtration(EQ, 1)).dim(1) == []


def test_non_monotone_rejected():
    K = FilteredComplex.from_simplices([((0,), 0), ((1,), 0), ((2,), 0), ((0, 1), 2.0),
                                        ((0, 2), 0.5), ((1, 2), 0.5), ((0, 1, 2), 1.0)])
    with pytest.raises(NonMonotoneError):
        compute_barcode(K)
    K = FilteredComplex.from_simplices([((0,), 0), ((1,), 0), ((0, 1, 2), 1.0), ((0, 1), 1.0)])
    with pytest.raises(NonMonotoneError):
        compute_barcode(K)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(3, 7), st.sampled_from(["vr", "cech"]), st.sampled_from([2, 3]))
def test_matches_rank_oracle(seed, n, kind, d):
    rng = np.random.default_rng(seed)
    P = rng.random((n, d))
    K = (vr_filtration if kind == "vr" else cech_filtration)(P, 2)
    B = compute_barcode(K, 2)
    assert B.intervals == brute_barcode(complex_as_list(K), 2)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_methods_agree(seed):
    rng = np.random.default_rng(seed)
    P = rng.random((16, 2))
    for K in (vr_filtration(P, 2, 0.5), cech_filtration(P, 1, 0.6)):
        assert compute_barcode(K, method="homology").intervals == compute_barcode(K).intervals


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(3, 7))
def test_euler_characteristic(seed, n):
    rng = np.random.default_rng(seed)
    K = vr_filtration(rng.random((n, 2)), 2)
    B = compute_barcode(K, K.maxdim)
    for r in sorted({float(x) for R in K.radii for x in R}):
        chi_simplices = sum((-1) ** k * int(np.sum(R <= r)) for k, R in enumerate(K.radii))
        chi_betti = sum((-1) ** q * sum(1 for b, e in B.dim(q) if b <= r < e)
                        for q in range(K.maxdim + 1))
        assert chi_simplices == chi_betti


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_adding_point_changes_h0_by_one(seed):
    rng = np.random.default_rng(seed)
    P = rng.random((8, 2))
    a = betti_at(compute_barcode(vr_filtration(P, 0)), 0, (0.0, 0.0))
    b = betti_at(compute_barcode(vr_filtration(np.vstack([P, rng.random((1, 2))]), 0)), 0, (0.0, 0.0))
    assert abs(a - b) <= 1


def test_betti_queries():
    B = Barcode([(0, 0.0, INF), (1, 0.1, 0.9), (1, 0.3, 0.4)])
    assert betti_at(B, 1, (0.2, 0.8)) == 1
    assert betti_at(B, 1, (0.05, 0.05)) == 0
    assert betti_at(B, 0, (0.0, 100.0)) == 1
    with pytest.raises(ValueError):
        betti_at(B, 1, (0.5, 0.2))


def test_json_schema_and_order():
    B = Barcode([(1, 0.3, 0.4), (0, 0.0, INF), (0, 0.0, 0.5), (1, 0.1, 0.9)])
    rows = json.loads(B.to_json())
    assert rows[0] == {"dim": 0, "birth": 0.0, "death": 0.5}
    assert rows[1] == {"dim": 0, "birth": 0.0, "death": None}
    keys = [(r["dim"], r["birth"], INF if r["death"] is None else r["death"]) for r in rows]
    assert keys == sorted(keys)
    assert Barcode.from_json(B.to_json()).intervals == B.intervals


# -- death centers -------------------------------------------------------------


def test_circle_death_center():
    P = circle(120)
    B = compute_barcode(cech_filtration(P, 1, 1.01))
    (b, d), = B.dim(1)
    assert 0.99 <= d <= 1.0
    y, dist = locate_death_center(P, d, 0.01)
    assert np.linalg.norm(y) <= 0.01


def test_ellipse_death_center_on_axis():
    t = 2 * np.pi * np.arange(160) / 160
    P = np.stack([2 * np.cos(t), np.sin(t)], axis=1)
    B = compute_barcode(cech_filtration(P, 1, 1.05))
    deaths = [d for _, d in B.dim(1) if math.isfinite(d)]
    assert deaths
    for d in deaths:
        y, _ = locate_death_center(P, d, 0.01)
        assert abs(y[1]) <= 0.01


def test_two_points_have_no_center():
    with pytest.raises(NoQualifyingPointError):
        locate_death_center(np.array([[0.0, 0.0], [1.0, 0.0]]), 0.5, 0.01)
