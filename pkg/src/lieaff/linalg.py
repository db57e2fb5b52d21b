"""Affine solution sets of linear systems over GF(p)."""

from __future__ import annotations

import itertools

import numpy as np


def solve_mod_p(A, b, p: int):
    """Solve ``A z = b`` over GF(p).

    Returns ``(particular, basis)`` with the nullspace basis as rows, or
    ``None`` when the system is inconsistent.
    """
    A = np.array(A, dtype=object) % p
    b = np.array(b, dtype=object) % p
    rows, cols = A.shape
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        nz = [i for i in range(r, rows) if aug[i, c] % p]
        if not nz:
            continue
        aug[[r, nz[0]]] = aug[[nz[0], r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(aug[i, -1] % p for i in range(r, rows)):
        return None
    particular = np.zeros(cols, dtype=object)
    for i, c in enumerate(pivots):
        particular[c] = aug[i, -1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=object)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-aug[i, f]) % p
        basis.append(v)
    return particular.astype(np.int64), np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def span_elements(particular, basis, p: int):
    """All ``particular + Σ c_i basis_i``, sorted lexicographically."""
    pts = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = particular.copy()
        for c, row in zip(coeffs, basis):
            v = v + c * row
        pts.add(tuple(int(x) for x in v % p))
    return sorted(pts)
