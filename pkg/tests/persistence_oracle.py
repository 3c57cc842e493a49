"""Barcodes from ranks of boundary matrices at every critical radius.

Independent of the column reduction: persistent Betti numbers
beta^{i,j} = dim Z(K_i) - dim(Z(K_i) & B(K_j)) are computed from GF(2)
ranks, and the interval multiplicities follow by inclusion-exclusion.
"""

import itertools


def gf2_rank(rows):
    """Rank of a GF(2) matrix given as a list of int bitmasks."""
    basis = {}
    rank = 0
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                rank += 1
                break
    return rank


def _columns(D, keep_rows):
    return [c & keep_rows for c in D]


def brute_barcode(simplices, maxdim):
    """``simplices``: list of (vertex tuple, radius). Returns sorted (dim, birth, death)."""
    by_dim = {}
    for s, r in simplices:
        by_dim.setdefault(len(s) - 1, []).append((tuple(sorted(s)), r))
    index = {q: {s: k for k, (s, _) in enumerate(v)} for q, v in by_dim.items()}
    radius = {s: r for s, r in simplices}
    crit = sorted({r for _, r in simplices})
    m = len(crit)

    def members(q, i):
        """bitmask of q-simplices present at critical index i (-1 = none)."""
        if i < 0 or q not in by_dim:
            return 0
        mask = 0
        for s, r in by_dim[q]:
            if r <= crit[i]:
                mask |= 1 << index[q][s]
        return mask

    def boundary(q, i):
        """columns of the boundary map C_q -> C_{q-1} restricted to K_i."""
        if q not in by_dim or q == 0:
            return []
        cols = []
        for s, r in by_dim[q]:
            if r <= crit[i]:
                col = 0
                for f in itertools.combinations(s, q):
                    col |= 1 << index[q - 1][f]
                cols.append(col)
        return cols

    def beta(q, i, j):
        if i < 0:
            return 0
        n_q = bin(members(q, i)).count("1")
        # rank of d_q on K_i: transpose-free since rank(row space) = rank(col space)
        z = n_q - gf2_rank(boundary(q, i))
        D = boundary(q + 1, j)
        outside = ((1 << len(by_dim.get(q, []))) - 1) & ~members(q, i)
        inter = gf2_rank(D) - gf2_rank(_columns(D, outside))
        return z - inter

    out = []
    for q in range(maxdim + 1):
        table = {}
        for i in range(-1, m):
            for j in range(max(i, 0), m):
                table[i, j] = beta(q, i, j)
        for i in range(m):
            for j in range(i + 1, m):
                mu = table[i, j - 1] - table[i, j] - table[i - 1, j - 1] + table[i - 1, j]
                out += [(q, crit[i], crit[j])] * mu
            inf = table[i, m - 1] - table[i - 1, m - 1]
            out += [(q, crit[i], float("inf"))] * inf
    return sorted(out)


def complex_as_list(K):
    items = []
    for k, (S, R) in enumerate(zip(K.simplices, K.radii)):
        for s, r in zip(S.tolist(), R.tolist()):
            items.append((tuple(s), r))
    return items
