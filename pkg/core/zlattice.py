"""
fb/core/zlattice.py
───────────────────
Exact integer lattice helpers on top of sympy's DomainMatrix normal forms.
  • integer_kernel  — Z-basis of {x : M·x = 0} via the Smith decomposition
  • hnf_basis       — canonical column Hermite basis of a spanned lattice
  • same_lattice / lattice_contains
"""

import logging

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from core.errors import ConsistencyError

log = logging.getLogger("fb.zlattice")

Vector = tuple[int, ...]


def _dm(rows: list[list[int]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(v)) for v in row] for row in rows], (len(rows), ncols), ZZ)


def _columns(dm: DomainMatrix) -> list[Vector]:
    rows = dm.to_list()
    if not rows:
        return []
    return [tuple(int(r[j]) for r in rows) for j in range(len(rows[0]))]


def integer_kernel(rows: list[list[int]], ncols: int) -> list[Vector]:
    """Z-basis of the integer kernel of the matrix with the given rows."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
    smf, _s, t = smith_normal_decomp(_dm(rows, ncols))
    diag = smf.to_list()
    rank = sum(1 for i in range(min(len(rows), ncols)) if diag[i][i] != 0)
    basis = _columns(t)[rank:]
    for v in basis:
        for r in rows:
            if sum(a * b for a, b in zip(r, v)):
                raise ConsistencyError("integer kernel vector does not annihilate the matrix")
    log.debug("integer kernel: %d×%d of rank %d → %d vectors", len(rows), ncols, rank, len(basis))
    return basis


def hnf_basis(vectors: list[Vector]) -> tuple[Vector, ...]:
    """Canonical basis (column Hermite normal form) of the lattice spanned."""
    vectors = [tuple(int(x) for x in v) for v in vectors if any(v)]
    if not vectors:
        return ()
    dim = len(vectors[0])
    cols = [[v[i] for v in vectors] for i in range(dim)]
    return tuple(_columns(hermite_normal_form(_dm(cols, len(vectors)))))


def same_lattice(a: list[Vector], b: list[Vector]) -> bool:
    return hnf_basis(a) == hnf_basis(b)


def lattice_contains(big: list[Vector], small: list[Vector]) -> bool:
    """True iff every vector of `small` lies in the Z-span of `big`."""
    return hnf_basis(list(big) + list(small)) == hnf_basis(big)
