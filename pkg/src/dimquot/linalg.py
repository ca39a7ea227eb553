"""Exact integer matrix and lattice arithmetic.

Matrices are plain lists of rows of Python ints, so nothing overflows.
Lattices are kept in row-style Hermite normal form: pivots strictly move
right, pivots are positive and entries above a pivot lie in ``[0, pivot)``.
That form is unique, so two lattices are equal iff their bases are.

The one place numpy is used is :func:`hnf_modular`, which handles
full-rank lattices known to contain ``D * Z^k``. All its entries stay
below ``D`` there, so int64 is safe whenever ``D < 2**31``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


class LatticeError(ValueError):
    pass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if not A:
        return []
    n = len(B[0]) if B else 0
    cols = list(zip(*B)) if B else []
    out = []
    for row in A:
        if not cols:
            out.append([0] * n)
            continue
        out.append([sum(a * b for a, b in zip(row, col) if a) for col in cols])
    return out


def vecmat(v: Sequence[int], M: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Row vector times matrix."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    out = [0] * ncols
    for a, row in zip(v, M):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] += a * b
    return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A = _as_rows(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite normal form


def _reduce_above(rows: list[list[int]], pivots: list[int]) -> None:
    """Bring entries above every pivot into [0, pivot), in place."""
    for i in range(len(rows)):
        ri = rows[i]
        for j in range(i + 1, len(rows)):
            c = pivots[j]
            p = rows[j][c]
            q = ri[c] // p
            if q:
                rj = rows[j]
                for t in range(c, len(ri)):
                    if rj[t]:
                        ri[t] -= q * rj[t]


class _Echelon:
    """Incremental exact echelon basis, keyed by pivot column."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}

    def insert(self, v: list[int]) -> None:
        rows = self.rows
        n = self.ncols
        c = 0
        while True:
            while c < n and v[c] == 0:
                c += 1
            if c == n:
                return
            row = rows.get(c)
            if row is None:
                if v[c] < 0:
                    v = [-x for x in v]
                # keep entries small against the lower pivots
                for c2 in sorted(rows):
                    if c2 > c and v[c2]:
                        r2 = rows[c2]
                        q = v[c2] // r2[c2]
                        if q:
                            for t in range(c2, n):
                                if r2[t]:
                                    v[t] -= q * r2[t]
                rows[c] = v
                return
            p, a = row[c], v[c]
            if a % p == 0:
                q = a // p
                for t in range(c, n):
                    if row[t]:
                        v[t] -= q * row[t]
                continue
            g, s, t_ = xgcd(p, a)
            pg, ag = p // g, a // g
            new = [s * x + t_ * y for x, y in zip(row, v)]
            v = [pg * y - ag * x for x, y in zip(row, v)]
            rows[c] = new

    @property
    def rank(self) -> int:
        return len(self.rows)

    def finish(self) -> list[list[int]]:
        pivots = sorted(self.rows)
        out = [list(self.rows[c]) for c in pivots]
        _reduce_above(out, pivots)
        return out


def hnf_rows(M, ncols: int | None = None) -> list[list[int]]:
    """Row-style HNF of the row span of ``M`` (zero rows dropped)."""
    rows = _as_rows(M)
    if ncols is None:
        if not rows:
            raise LatticeError("cannot infer width of an empty matrix")
        ncols = len(rows[0])
    ech = _Echelon(ncols)
    for r in rows:
        if len(r) != ncols:
            raise LatticeError("ragged matrix")
        if any(r):
            ech.insert(list(r))
    return ech.finish()


def hnf_modular(M, ncols: int, modulus: int) -> list[list[int]]:
    """HNF of ``rowspan(M) + modulus * Z^ncols``.

    Batch elimination over Z/modulus, keeping the Howell property: every time
    a pivot ``g`` is placed, ``(modulus // g) * row`` is pushed back into the
    pool so that the lifted triangular basis really contains
    ``modulus * Z^ncols``. Result equals ``hnf_rows(M + modulus*I)``.
    """
    D = int(modulus)
    if D <= 0:
        raise LatticeError("modulus must be positive")
    if D == 1 or ncols == 0:
        return identity(ncols) if D == 1 else []
    dtype = np.int64 if D < 2**31 else object
    rows = _as_rows(M)
    if rows:
        A = np.array(rows, dtype=dtype).reshape(len(rows), ncols) % D
    else:
        A = np.zeros((0, ncols), dtype=dtype)
    pivots: list[list[int] | None] = [None] * ncols
    for c in range(ncols):
        if A.shape[0]:
            A = A[np.any(A != 0, axis=1)]
        if A.shape[0] > 1 and dtype is np.int64:
            A = np.unique(A, axis=0)
        if A.shape[0] == 0:
            continue
        while True:
            col = A[:, c]
            nz = np.flatnonzero(col)
            if len(nz) == 0:
                break
            if len(nz) == 1:
                break
            k = nz[np.argmin(col[nz])]
            p = col[k]
            q = col // p
            q[k] = 0
            A = (A - q[:, None] * A[k][None, :]) % D
        nz = np.flatnonzero(A[:, c])
        if len(nz) == 0:
            continue
        k = nz[0]
        r = A[k]
        A = np.delete(A, k, axis=0)
        p = int(r[c])
        g, s, _ = xgcd(p, D)
        new = (r * (s % D)) % D
        pivots[c] = [int(x) for x in new]
        pivots[c][c] = g
        ann = (r * (D // g)) % D
        if np.any(ann != 0):
            A = np.vstack([A, ann[None, :]])
    out = []
    piv_cols = []
    for c in range(ncols):
        row = pivots[c]
        if row is None:
            row = [0] * ncols
            row[c] = D
        out.append(row)
        piv_cols.append(c)
    _reduce_above(out, piv_cols)
    return out


class Lattice:
    """Subgroup of Z^ambient_rank stored by its HNF basis."""

    __slots__ = ("ambient_rank", "basis", "pivots", "_key")

    def __init__(self, basis: list[list[int]], ambient_rank: int, _checked: bool = False):
        if not _checked:
            basis = hnf_rows(basis, ambient_rank) if basis else []
        self.ambient_rank = ambient_rank
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)
        self._key = None

    @classmethod
    def from_generators(cls, gens, ambient_rank: int, modulus: int | None = None) -> "Lattice":
        if modulus is not None:
            return cls(hnf_modular(gens, ambient_rank, modulus), ambient_rank, _checked=True)
        return cls(hnf_rows(gens, ambient_rank) if len(gens) else [], ambient_rank, _checked=True)

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(identity(n), n, _checked=True)

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls([], n, _checked=True)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Lattice) and self.ambient_rank == other.ambient_rank
                and self.basis == other.basis)

    def __hash__(self) -> int:
        if self._key is None:
            self._key = hash((self.ambient_rank, self.basis))
        return self._key

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, ambient={self.ambient_rank}, basis={list(map(list, self.basis))})"

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` in the HNF basis, or None if ``v`` is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise LatticeError("vector length does not match ambient rank")
        w = [int(x) for x in v]
        coeffs = []
        pos = 0
        for row, c in zip(self.basis, self.pivots):
            for t in range(pos, c):
                if w[t]:
                    return None
            q, rem = divmod(w[c], row[c])
            if rem:
                return None
            coeffs.append(q)
            if q:
                for t in range(c, len(w)):
                    if row[t]:
                        w[t] -= q * row[t]
            pos = c + 1
        if any(w[pos:]):
            return None
        return coeffs

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(r) for r in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        _check_same(self, other)
        return Lattice.from_generators(list(self.basis) + list(other.basis), self.ambient_rank)

    def scaled(self, c: int) -> "Lattice":
        return Lattice.from_generators([[c * x for x in r] for r in self.basis], self.ambient_rank)

    def determinant(self) -> int:
        """Index in Z^n for a full-rank lattice (product of pivots)."""
        if self.rank != self.ambient_rank:
            raise LatticeError("determinant needs a full-rank lattice")
        out = 1
        for r, c in zip(self.basis, self.pivots):
            out *= r[c]
        return out

    def intersect(self, other: "Lattice") -> "Lattice":
        return lattice_intersect(self, other)


def _check_same(a: Lattice, b: Lattice) -> None:
    if a.ambient_rank != b.ambient_rank:
        raise LatticeError(f"ambient rank mismatch: {a.ambient_rank} vs {b.ambient_rank}")


def hnf(M, ncols: int | None = None) -> Lattice:
    rows = _as_rows(M)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return Lattice(hnf_rows(rows, ncols) if rows else [], ncols, _checked=True)


def hnf_auto(rows: list[list[int]], ncols: int) -> Lattice:
    """HNF that switches to modular elimination once the span is full rank.

    Rows are consumed exactly until they span a full-rank sublattice; its
    determinant then serves as a modulus for the remaining rows.
    """
    rows = [r for r in _as_rows(rows) if any(r)]
    ech = _Echelon(ncols)
    used = 0
    for r in rows:
        ech.insert(list(r))
        used += 1
        if ech.rank == ncols:
            break
    if ech.rank < ncols or used == len(rows):
        return Lattice(ech.finish(), ncols, _checked=True)
    partial = ech.finish()
    D = 1
    for i, r in enumerate(partial):
        D *= r[i]
    if D == 1:
        return Lattice.full(ncols)
    return Lattice(hnf_modular(partial + rows[used:], ncols, D), ncols, _checked=True)


# ---------------------------------------------------------------------------
# kernels, solving, intersections


def left_kernel(M, nrows: int | None = None) -> list[list[int]]:
    """Basis (in HNF) of ``{x : x M = 0}``."""
    rows = _as_rows(M)
    m = len(rows) if nrows is None else nrows
    if m == 0:
        return []
    n = len(rows[0]) if rows else 0
    aug = [row + [int(i == j) for j in range(m)] for i, row in enumerate(rows)]
    H = hnf_rows(aug, n + m)
    return [r[n:] for r in H if not any(r[:n])]


def solve_left(M, b: Sequence[int]) -> list[int] | None:
    """Some integer ``x`` with ``x M = b``, or None."""
    rows = _as_rows(M)
    m = len(rows)
    n = len(b)
    if m == 0:
        return [] if not any(b) else None
    aug = [row + [int(i == j) for j in range(m)] for i, row in enumerate(rows)]
    H = hnf_rows(aug, n + m)
    top = [r for r in H if any(r[:n])]
    lat = Lattice([r[:n] for r in top], n, _checked=True)
    coeffs = lat.coordinates(b)
    if coeffs is None:
        return None
    x = [0] * m
    for c, r in zip(coeffs, top):
        if c:
            for j in range(m):
                x[j] += c * r[n + j]
    return x


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Kernel method: ``x B1 = y B2`` with ``(x, y)`` in ``ker [B1; -B2]``."""
    _check_same(L1, L2)
    n = L1.ambient_rank
    if L1.rank == 0 or L2.rank == 0:
        return Lattice.zero(n)
    B1 = [list(r) for r in L1.basis]
    B2 = [[-x for x in r] for r in L2.basis]
    K = left_kernel(B1 + B2)
    gens = [vecmat(k[:len(B1)], B1, n) for k in K]
    return Lattice.from_generators(gens, n)


def lattice_member(v: Sequence[int], L: Lattice) -> bool:
    return L.contains(v)


# ---------------------------------------------------------------------------
# Smith normal form


def snf(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(D, U, V)`` with ``U M V = D`` diagonal, ``d1 | d2 | ...``, ``di >= 0``."""
    D, U, V, _ = snf_with_inverse(M)
    return D, U, V


def snf_with_inverse(M):
    """Like :func:`snf` but also returns ``V^-1``."""
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    U = identity(m)
    V = identity(n)
    Vi = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src ; V^-1 gets row_src -= q row_dst
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def combine_rows(i, j, c):
        # unimodular mix of rows i, j so that A[i][c] becomes gcd
        a, b = A[i][c], A[j][c]
        g, s, t = xgcd(a, b)
        ag, bg = a // g, b // g
        A[i], A[j] = ([s * x + t * y for x, y in zip(A[i], A[j])],
                      [-bg * x + ag * y for x, y in zip(A[i], A[j])])
        U[i], U[j] = ([s * x + t * y for x, y in zip(U[i], U[j])],
                      [-bg * x + ag * y for x, y in zip(U[i], U[j])])

    def combine_cols(i, j, r):
        a, b = A[r][i], A[r][j]
        g, s, t = xgcd(a, b)
        ag, bg = a // g, b // g
        # new col_i = s col_i + t col_j ; new col_j = -bg col_i + ag col_j
        for row in A:
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, -bg * x + ag * y
        for row in V:
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, -bg * x + ag * y
        # inverse of [[s, -bg], [t, ag]] (acting on columns) is [[ag, bg], [-t, s]]
        ri, rj = Vi[i], Vi[j]
        Vi[i], Vi[j] = ([ag * x + bg * y for x, y in zip(ri, rj)],
                        [-t * x + s * y for x, y in zip(ri, rj)])

    t = 0
    while t < min(m, n):
        # choose the smallest nonzero entry of the trailing block as pivot
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    if A[i][t] % A[t][t] == 0:
                        add_row(i, t, -(A[i][t] // A[t][t]))
                    else:
                        combine_rows(t, i, t)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    if A[t][j] % A[t][t] == 0:
                        add_col(j, t, -(A[t][j] // A[t][t]))
                    else:
                        combine_cols(t, j, t)
                        done = False
            if not done:
                continue
            # divisibility of the trailing block
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V, Vi


def invariant_factors(M) -> list[int]:
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def quotient_invariants(Lsub: Lattice, Lsup: Lattice) -> tuple[list[int], int]:
    """Structure of ``Lsup / Lsub`` as (invariant factors > 1, free rank)."""
    _check_same(Lsub, Lsup)
    coords = []
    for r in Lsub.basis:
        c = Lsup.coordinates(r)
        if c is None:
            raise LatticeError("Lsub is not contained in Lsup")
        coords.append(c)
    k = Lsup.rank
    free = k - Lsub.rank
    if not coords:
        return [], free
    diag = [d for d in invariant_factors(coords) if d != 1]
    return [d for d in diag if d != 0], free


def check_unimodular(U) -> bool:
    return abs(determinant(U)) == 1


__all__ = [
    "Lattice", "LatticeError", "xgcd", "hnf", "hnf_rows", "hnf_modular", "hnf_auto",
    "snf", "snf_with_inverse", "invariant_factors", "lattice_intersect", "lattice_member",
    "quotient_invariants", "left_kernel", "solve_left", "matmul", "vecmat", "identity",
    "determinant", "check_unimodular",
]
