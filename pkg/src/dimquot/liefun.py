"""Free Lie ring components ``L_n(A)``, the maps ``l_n`` and ``S_n = coker l_n``.

Basis of ``L_n(Z^r)``: Lyndon words of length ``n`` bracketed by standard
factorization (``w = uv`` with ``v`` the longest proper Lyndon suffix). The
tensor expansion of ``b(w)`` is ``w`` plus lexicographically larger words, so
Lyndon coordinates of any Lie element come from a triangular sweep.

For ``A = Z^r / K`` we use right exactness: ``L_n(A)`` is ``L_n(Z^r)`` modulo
the degree ``n`` part of the ideal generated by ``K``, which is spanned by the
left-normed brackets ``[k, e_{j2}, ..., e_{jn}]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .abelian import (
    AbHom,
    direct_sum,
    FPAbGroup,
    hom_decompose,
    sp,
    tensor,
    tensor_power,
)
from .linalg import Lattice, hnf_auto

MAX_DEGREE = 4

Poly = dict  # word (tuple of letters) -> int


def _padd(p: Poly, q: Poly, c: int = 1) -> Poly:
    out = dict(p)
    for w, v in q.items():
        nv = out.get(w, 0) + c * v
        if nv:
            out[w] = nv
        else:
            out.pop(w, None)
    return out


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            nv = out.get(w, 0) + a * b
            if nv:
                out[w] = nv
            else:
                out.pop(w)
    return out


def commutator(p: Poly, q: Poly) -> Poly:
    """``pq - qp`` in the free associative ring."""
    return _padd(_pmul(p, q), _pmul(q, p), -1)


def letter(i: int) -> Poly:
    return {(i,): 1}


def linear(v: Sequence[int]) -> Poly:
    return {(i,): c for i, c in enumerate(v) if c}


def is_lyndon(w: tuple) -> bool:
    n = len(w)
    return n > 0 and all(w < w[i:] + w[:i] for i in range(1, n))


@lru_cache(maxsize=None)
def lyndon_words(r: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Lyndon words of length ``n`` over ``0..r-1`` in increasing lex order."""
    return tuple(w for w in itertools.product(range(r), repeat=n) if is_lyndon(w))


def standard_factorization(w: tuple) -> tuple[tuple, tuple]:
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("letters have no standard factorization")


@lru_cache(maxsize=None)
def _bracket_expansion(w: tuple) -> tuple:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    p = commutator(dict(_bracket_expansion(u)), dict(_bracket_expansion(v)))
    return tuple(sorted(p.items()))


def bracket_expansion(w: tuple) -> Poly:
    """Tensor expansion of the standard bracketing of the Lyndon word ``w``."""
    return dict(_bracket_expansion(tuple(w)))


def bracketing(w: tuple) -> str:
    if len(w) == 1:
        return str(w[0] + 1)
    u, v = standard_factorization(w)
    return f"[{bracketing(u)},{bracketing(v)}]"


@dataclass(frozen=True)
class LyndonBasis:
    rank: int
    degree: int
    words: tuple

    @property
    def bracketings(self) -> list[str]:
        return [bracketing(w) for w in self.words]

    def __len__(self) -> int:
        return len(self.words)


def lyndon_basis(r: int, n: int) -> LyndonBasis:
    return LyndonBasis(r, n, lyndon_words(r, n))


def lyndon_coordinates(p: Poly, r: int, n: int) -> list[int]:
    """Coordinates of a homogeneous Lie element in the Lyndon basis.

    Raises ValueError if ``p`` is not a Lie element.
    """
    words = lyndon_words(r, n)
    rem = {w: c for w, c in p.items() if c}
    if any(len(w) != n for w in rem):
        raise ValueError("element is not homogeneous of the requested degree")
    coords = []
    for w in words:
        c = rem.get(w, 0)
        coords.append(c)
        if c:
            rem = _padd(rem, bracket_expansion(w), -c)
    if rem:
        raise ValueError("element is not a Lie element")
    return coords


def left_normed(*elts: Poly) -> Poly:
    """``[a1, a2, ..., an] = [[...[a1, a2], ...], an]``."""
    out = elts[0]
    for e in elts[1:]:
        out = commutator(out, e)
    return out


def witt_number(r: int, n: int) -> int:
    """Necklace count ``(1/n) sum_{d|n} mu(d) r^(n/d)``."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * r ** (n // d)
    return total // n


def _mobius(n: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LieComponent:
    base: FPAbGroup
    degree: int
    basis: LyndonBasis
    group: FPAbGroup
    l: AbHom  # L_n(A) -> A^{(x)n}

    def bracket(self, *vectors: Sequence[int]) -> list[int]:
        """Lyndon coordinates of the left-normed bracket of elements of ``A``."""
        r = self.base.ngens
        return lyndon_coordinates(left_normed(*[linear(v) for v in vectors]), r, self.degree)

    def from_poly(self, p: Poly) -> list[int]:
        return lyndon_coordinates(p, self.base.ngens, self.degree)


def _tensor_coords(p: Poly, T) -> list[int]:
    out = [0] * T.group.ngens
    for w, c in p.items():
        out[T.index[w]] += c
    return out


@lru_cache(maxsize=128)
def lie_component(A: FPAbGroup, n: int) -> LieComponent:
    """``L_n(A)`` with ``l_n : L_n(A) -> A^{(x)n}``."""
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree {n} outside supported range 1..{MAX_DEGREE}")
    r = A.ngens
    basis = lyndon_basis(r, n)
    rows = []
    for k in A.rel.basis:
        for js in itertools.product(range(r), repeat=n - 1):
            p = left_normed(linear(k), *[letter(j) for j in js])
            c = lyndon_coordinates(p, r, n)
            if any(c):
                rows.append(c)
    labels = basis.bracketings
    G = FPAbGroup(labels, relation_lattice=hnf_auto(rows, len(labels))) if rows else FPAbGroup(labels)
    T = tensor_power(A, n)
    l = AbHom(G, T.group, [_tensor_coords(bracket_expansion(w), T) for w in basis.words])
    return LieComponent(A, n, basis, G, l)


def lie_map(f: AbHom, n: int) -> AbHom:
    """``L_n(f)``."""
    LA, LB = lie_component(f.domain, n), lie_component(f.codomain, n)
    rows = [_lie_image(w, f, LB) for w in LA.basis.words]
    return AbHom(LA.group, LB.group, rows)


def _lie_image(w: tuple, f: AbHom, LB: LieComponent) -> list[int]:
    """Image of the standard bracket ``b(w)`` under ``f``, in Lyndon coordinates of the target."""

    def image(u: tuple) -> Poly:
        if len(u) == 1:
            return linear(f.matrix[u[0]])
        a, b = standard_factorization(u)
        return commutator(image(a), image(b))

    return LB.from_poly(image(w))


def tensor_power_map(f: AbHom, n: int) -> AbHom:
    TA, TB = tensor_power(f.domain, n), tensor_power(f.codomain, n)
    rows = [TB.pure(*[f.matrix[i] for i in w]) for w in TA.index]
    return AbHom(TA.group, TB.group, rows)


@dataclass(frozen=True)
class SComponent:
    base: FPAbGroup
    degree: int
    group: FPAbGroup
    projection: AbHom  # A^{(x)n} -> S_n(A)


def s_component(A: FPAbGroup, n: int) -> SComponent:
    """``S_n(A) = coker(l_n)``; note ``S_1(A) = 0`` since ``l_1`` is the identity."""
    L = lie_component(A, n)
    dec = hom_decompose(L.l)
    return SComponent(A, n, dec.cokernel, dec.cokernel_projection)


@dataclass
class PBWReport:
    group: str
    injective: bool
    exact_middle: bool
    surjective: bool
    orders: dict

    @property
    def exact(self) -> bool:
        return self.injective and self.exact_middle and self.surjective


def pbw_check(A: FPAbGroup, order_cap: int = 256, rank_cap: int = 3) -> PBWReport:
    """Exactness of ``0 -> L_3(A) + A (x) L_2(A) -> A^{(x)3} -> SP^3(A) -> 0``."""
    if A.is_finite and A.order() > order_cap:
        raise ValueError(f"group order {A.order()} above cap {order_cap}")
    if not A.is_finite and A.ngens > rank_cap:
        raise ValueError(f"rank above cap {rank_cap}")
    T3 = tensor_power(A, 3)
    L3 = lie_component(A, 3)
    L2 = lie_component(A, 2)
    AL2 = tensor(A, L2.group)
    rows = list(L3.l.matrix)
    # e_k (x) b  ->  e_k (x) l_2(b)
    for k in range(A.ngens):
        for t in range(L2.group.ngens):
            w = L2.basis.words[t]
            p = _pmul(letter(k), bracket_expansion(w))
            rows.append(_tensor_coords(p, T3))
    dom = direct_sum(L3.group, AL2.group)
    phi = AbHom(dom, T3.group, rows)
    S3 = sp(A, 3)
    s3 = S3.projection(T3)
    d_phi = hom_decompose(phi)
    d_s3 = hom_decompose(s3)
    injective = d_phi.kernel.is_trivial
    surjective = d_s3.cokernel.is_trivial
    # exactness in the middle: image(phi) + relations == ker(s3) as lattices
    img = Lattice.from_generators([list(r) for r in phi.matrix] + [list(r) for r in T3.group.rel.basis],
                                  T3.group.ngens)
    exact_middle = img == d_s3.kernel_lattice
    orders = {
        "L3": L3.group.structure(),
        "A(x)L2": AL2.group.structure(),
        "T3": T3.group.structure(),
        "SP3": S3.group.structure(),
    }
    return PBWReport(A.structure(), injective, exact_middle, surjective, orders)


__all__ = [
    "lyndon_words", "lyndon_basis", "LyndonBasis", "bracket_expansion", "bracketing",
    "standard_factorization", "lyndon_coordinates", "left_normed", "commutator", "letter", "linear",
    "witt_number", "lie_component", "LieComponent", "lie_map", "tensor_power_map",
    "s_component", "SComponent", "pbw_check", "PBWReport", "MAX_DEGREE",
]
