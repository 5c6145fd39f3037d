"""
fb/core/f2.py
─────────────
Linear algebra over GF(2) on numpy bool arrays: row reduction, kernels,
spans.  Unit groups of Burnside rings are F2-vector spaces, so every unit
computation lands here.
"""

import numpy as np


def as_matrix(rows, width: int) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, width), dtype=np.bool_)
    return np.array(rows, dtype=np.bool_).reshape(len(rows), width)


def rref(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (nonzero rows, pivot columns)."""
    m = np.array(matrix, dtype=np.bool_, copy=True)
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        below = np.nonzero(m[:, c])[0]
        for i in below:
            if i != r:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(matrix: np.ndarray) -> int:
    return len(rref(matrix)[1])


def span_basis(matrix: np.ndarray) -> np.ndarray:
    """Canonical basis of the row space."""
    return rref(matrix)[0]


def same_span(a: np.ndarray, b: np.ndarray) -> bool:
    ra, rb = span_basis(a), span_basis(b)
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))


def in_span(basis: np.ndarray, v: np.ndarray) -> bool:
    stacked = np.vstack([basis, np.asarray(v, dtype=np.bool_)[None, :]])
    return rank(stacked) == rank(basis)


def nullspace(matrix: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : matrix·x = 0} over GF(2)."""
    ncols = matrix.shape[1]
    red, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    out = np.zeros((len(free), ncols), dtype=np.bool_)
    for k, f in enumerate(free):
        out[k, f] = True
        for i, p in enumerate(pivots):
            if red[i, f]:
                out[k, p] = True
    return out


def left_kernel(matrix: np.ndarray) -> np.ndarray:
    """Basis of {c : c·matrix = 0}."""
    return nullspace(matrix.T)


def combine(coeffs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Rows of coeffs·basis over GF(2)."""
    if coeffs.shape[0] == 0:
        return np.zeros((0, basis.shape[1]), dtype=np.bool_)
    return (coeffs.astype(np.uint8) @ basis.astype(np.uint8) % 2).astype(np.bool_)
