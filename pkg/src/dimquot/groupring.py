"""Ideals of the integral group ring and dimension subgroups.

Everything lives in the augmentation ideal, written in reduced coordinates:
``g - 1`` is the basis vector ``e_g`` for ``g != 1``, so ``ZG`` ideals inside
the augmentation ideal are lattices of rank ``|G| - 1``. Products reduce via

    (g - 1)(h - 1) = (gh - 1) - (g - 1) - (h - 1).

Since ``G_ab`` has exponent ``e`` we get ``e * aug ⊆ aug^2`` and hence
``e^(n-1) * aug ⊆ aug^n``, which lets every HNF here run modulo ``e^(n-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, ResourceCapError, Subgroup, subgroup_as_group
from .linalg import Lattice, quotient_invariants

RING_ORDER_CAP = 1000
MAX_POWER = 5


class GroupRingElement:
    """Element of ``Z[G]`` with one integer coordinate per group element."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent: FiniteGroup, coords: Sequence[int]):
        if len(coords) != parent.order:
            raise ValueError("coordinate vector length must equal the group order")
        self.parent = parent
        self.coords = tuple(int(c) for c in coords)

    @classmethod
    def group_element(cls, G: FiniteGroup, g: int) -> "GroupRingElement":
        c = [0] * G.order
        c[g] = 1
        return cls(G, c)

    @classmethod
    def difference(cls, G: FiniteGroup, g: int) -> "GroupRingElement":
        """``g - 1``."""
        c = [0] * G.order
        c[g] += 1
        c[G.identity] -= 1
        return cls(G, c)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.parent, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.parent, [a - b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        T = self.parent.table
        out = [0] * self.parent.order
        for g, a in enumerate(self.coords):
            if a:
                for h, b in enumerate(other.coords):
                    if b:
                        out[T[g, h]] += a * b
        return GroupRingElement(self.parent, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def augmentation(self) -> int:
        return sum(self.coords)

    def reduced(self) -> list[int]:
        """Coordinates in the ``g - 1`` basis; requires augmentation zero."""
        if self.augmentation():
            raise ValueError("element is not in the augmentation ideal")
        e = self.parent.identity
        return [c for g, c in enumerate(self.coords) if g != e]

    @classmethod
    def from_reduced(cls, G: FiniteGroup, v: Sequence[int]) -> "GroupRingElement":
        idx = _nonidentity(G)
        c = [0] * G.order
        for k, g in enumerate(idx):
            c[g] += v[k]
            c[G.identity] -= v[k]
        return cls(G, c)


def _nonidentity(G: FiniteGroup) -> list[int]:
    return [g for g in range(G.order) if g != G.identity]


def _position(G: FiniteGroup) -> np.ndarray:
    """Column of ``e_g`` in reduced coordinates, ``-1`` for the identity."""
    pos = -np.ones(G.order, dtype=np.int64)
    for k, g in enumerate(_nonidentity(G)):
        pos[g] = k
    return pos


def _product_rows(G: FiniteGroup, left: Sequence[int], right: Sequence[int]) -> list[list[int]]:
    """Reduced vectors of ``(a - 1)(b - 1)`` for all pairs."""
    pos = _position(G)
    m = G.order - 1
    rows = []
    for a in left:
        for b in right:
            if a == G.identity or b == G.identity:
                continue
            r = [0] * m
            ab = G.mul(a, b)
            if ab != G.identity:
                r[pos[ab]] += 1
            r[pos[a]] -= 1
            r[pos[b]] -= 1
            rows.append(r)
    return rows


def right_multiply(G: FiniteGroup, v: Sequence[int], t: int) -> list[int]:
    """``x * t`` for ``x`` in the augmentation ideal, reduced coordinates."""
    pos = _position(G)
    out = [0] * (G.order - 1)
    total = 0
    for k, g in enumerate(_nonidentity(G)):
        c = v[k]
        if c:
            total += c
            gt = G.mul(g, t)
            if gt != G.identity:
                out[pos[gt]] += c
    if t != G.identity:
        out[pos[t]] -= total
    return out


def left_multiply(G: FiniteGroup, t: int, v: Sequence[int]) -> list[int]:
    """``t * x`` for ``x`` in the augmentation ideal, reduced coordinates."""
    pos = _position(G)
    out = [0] * (G.order - 1)
    total = 0
    for k, g in enumerate(_nonidentity(G)):
        c = v[k]
        if c:
            total += c
            tg = G.mul(t, g)
            if tg != G.identity:
                out[pos[tg]] += c
    if t != G.identity:
        out[pos[t]] -= total
    return out


@dataclass(frozen=True)
class IdealLattice:
    """Two-sided ideal of ``Z[G]`` contained in the augmentation ideal."""

    parent: FiniteGroup
    lattice: Lattice
    sides: str = "two-sided"

    def __post_init__(self):
        if self.lattice.ambient_rank != self.parent.order - 1:
            raise ValueError("lattice rank does not match group order")
        if not is_two_sided(self.parent, self.lattice):
            raise ValueError("lattice is not closed under multiplication by G")

    def contains_element(self, g: int) -> bool:
        """Is ``g - 1`` in the ideal?"""
        if g == self.parent.identity:
            return True
        pos = _position(self.parent)
        v = [0] * (self.parent.order - 1)
        v[pos[g]] = 1
        return self.lattice.contains(v)

    def contains(self, x: GroupRingElement) -> bool:
        if x.augmentation():
            return False
        return self.lattice.contains(x.reduced())

    def __le__(self, other: "IdealLattice") -> bool:
        return other.lattice.contains_lattice(self.lattice)

    def __eq__(self, other) -> bool:
        return isinstance(other, IdealLattice) and self.parent is other.parent and self.lattice == other.lattice

    def __hash__(self) -> int:
        return hash(self.lattice)

    def index_in(self, other: "IdealLattice") -> tuple[list[int], int]:
        return quotient_invariants(self.lattice, other.lattice)


def is_two_sided(G: FiniteGroup, L: Lattice) -> bool:
    for b in L.basis:
        for s in G.generators:
            if not L.contains(right_multiply(G, b, s)) or not L.contains(left_multiply(G, s, b)):
                return False
    return True


def _close_right(G: FiniteGroup, L: Lattice, modulus: int | None) -> Lattice:
    """Smallest right ``Z[G]``-submodule containing ``L``."""
    while True:
        extra = []
        for b in L.basis:
            for s in G.generators:
                w = right_multiply(G, b, s)
                if not L.contains(w):
                    extra.append(w)
        if not extra:
            return L
        L = Lattice.from_generators([list(b) for b in L.basis] + extra, L.ambient_rank, modulus=modulus)


def _guard(G: FiniteGroup, n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_POWER:
        raise ResourceCapError(f"power {n} above cap {MAX_POWER}")
    if G.order > RING_ORDER_CAP:
        raise ResourceCapError(f"group order {G.order} above group-ring cap {RING_ORDER_CAP}")


def _modulus(G: FiniteGroup, n: int) -> int:
    A, _ = G.abelianization()
    e = A.exponent() if A.order() > 1 else 1
    return max(e, 1) ** (n - 1)


def aug_power(G: FiniteGroup, n: int) -> IdealLattice:
    """``aug^n`` as a lattice in reduced coordinates."""
    _guard(G, n)
    return _aug_chain(G, n)[n - 1]


_AUG_CACHE: dict[int, tuple] = {}


def _aug_chain(G: FiniteGroup, n: int) -> list[IdealLattice]:
    key = id(G)
    cached = _AUG_CACHE.get(key)
    if cached is not None and cached[0] is G and len(cached[1]) >= n:
        return cached[1]
    m = G.order - 1
    chain = [IdealLattice(G, Lattice.full(m))]
    gens = [s for s in G.generators if s != G.identity]
    for k in range(2, n + 1):
        D = _modulus(G, k)
        rows = []
        for b in chain[-1].lattice.basis:
            for s in gens:
                rows.append(right_multiply(G, b, s))
                rows[-1] = [x - y for x, y in zip(rows[-1], b)]  # b*(s-1)
        L = Lattice.from_generators(rows, m, modulus=D) if rows else Lattice.zero(m)
        L = _close_right(G, L, D)
        chain.append(IdealLattice(G, L))
    _AUG_CACHE[key] = (G, chain)
    return chain


def aug_power_exhaustive(G: FiniteGroup, n: int) -> Lattice:
    """``aug^n`` from all products ``(g1 - 1)...(gn - 1)``; cross-check for small groups."""
    _guard(G, n)
    m = G.order - 1
    L = Lattice.full(m)
    everything = _nonidentity(G)
    for k in range(2, n + 1):
        rows = []
        for b in L.basis:
            for g in everything:
                w = right_multiply(G, b, g)
                rows.append([x - y for x, y in zip(w, b)])
        L = Lattice.from_generators(rows, m) if rows else Lattice.zero(m)
    return L


def relative_ideal(E: FiniteGroup, N: Subgroup, n: int) -> IdealLattice:
    """``nE + E^n`` where ``n`` is the ideal generated by ``N - 1``.

    ``nE`` is spanned by ``(h - 1)(g - 1)`` with ``h in N``, ``g in E``.
    """
    _guard(E, n)
    if N.parent is not E:
        raise GroupError("subgroup belongs to a different group")
    if not E.is_normal(N):
        raise GroupError("subgroup is not normal")
    m = E.order - 1
    D = _modulus(E, n)
    base = aug_power(E, n).lattice
    rows = [list(b) for b in base.basis]
    rows += _product_rows(E, N.elements_list, _nonidentity(E))
    L = Lattice.from_generators(rows, m, modulus=D)
    return IdealLattice(E, L)


def _extract(G: FiniteGroup, I: IdealLattice) -> Subgroup:
    members = [g for g in range(G.order) if I.contains_element(g)]
    S = Subgroup(G, members)
    if not S.is_subgroup():
        raise AssertionError("dimension subgroup scan did not produce a subgroup")
    return S


def dimension_subgroup(G: FiniteGroup, n: int) -> Subgroup:
    """``D_n(G) = G ∩ (1 + aug^n)``."""
    D = _extract(G, aug_power(G, n))
    if not G.gamma(n) <= D:
        raise AssertionError("gamma_n is not contained in D_n")
    return D


def relative_dimension_subgroup(E: FiniteGroup, N: Subgroup, n: int) -> Subgroup:
    """``D_n(E, N) = E ∩ (1 + nE + E^n)``."""
    D = _extract(E, relative_ideal(E, N, n))
    if not relative_lower_bound(E, N, n) <= D:
        raise AssertionError("N' gamma_n(E) is not contained in D_n(E, N)")
    return D


def relative_lower_bound(E: FiniteGroup, N: Subgroup, n: int) -> Subgroup:
    """``N' gamma_n(E)``."""
    Nprime = E.commutator_subgroup(N, N)
    return Nprime.join(E.gamma(n))


# ---------------------------------------------------------------------------


@dataclass
class DimensionRow:
    n: int
    order_D: int
    order_gamma: int
    quotient: str
    quotient_order: int
    exponent: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "order_D": self.order_D,
            "order_gamma": self.order_gamma,
            "quotient": self.quotient,
            "quotient_order": self.quotient_order,
            "exponent": self.exponent,
        }


@dataclass
class DimensionReport:
    group: str
    order: int
    rows: list[DimensionRow] = field(default_factory=list)
    relative: bool = False

    def as_dict(self) -> dict:
        return {"group": self.group, "order": self.order, "relative": self.relative,
                "rows": [r.as_dict() for r in self.rows]}


def subquotient(G: FiniteGroup, big: Subgroup, small: Subgroup) -> tuple[str, int, int]:
    """Structure, order and exponent of ``big/small`` (``small`` normal in ``big``, quotient abelian)."""
    if not small <= big:
        raise AssertionError("subquotient needs small <= big")
    order = big.order // small.order
    if order == 1:
        return "0", 1, 1
    # big/small is abelian whenever it is a dimension quotient; check rather than assume
    c = G.commutator_subgroup(big, big)
    if not c <= small:
        return f"nonabelian of order {order}", order, _exponent_mod(G, big, small)
    inner, emb = subgroup_as_group(G, big)
    Q, _ = inner.quotient(Subgroup(inner, [emb[x] for x in small.elements_list]))
    A, _ = Q.abelianization()
    return A.structure(), order, _exponent_mod(G, big, small)


def _exponent_mod(G: FiniteGroup, big: Subgroup, small: Subgroup) -> int:
    from math import lcm
    e = 1
    for g in big.elements_list:
        k, x = 1, g
        while x not in small:
            x = G.mul(x, g)
            k += 1
        e = lcm(e, k)
    return e


def dimension_report(G: FiniteGroup, n_max: int, N: Subgroup | None = None,
                     name: str | None = None) -> DimensionReport:
    """Per ``n``: ``|D_n|``, ``|gamma_n|`` and the structure of ``D_n / gamma_n``.

    With ``N`` given, the relative groups ``D_n(E, N)`` and ``N' gamma_n(E)`` are used.
    """
    if n_max > MAX_POWER:
        raise ResourceCapError(f"n_max {n_max} above cap {MAX_POWER}")
    rep = DimensionReport(name or G.name, G.order, relative=N is not None)
    for n in range(1, n_max + 1):
        if N is None:
            D = dimension_subgroup(G, n)
            low = G.gamma(n)
        else:
            D = relative_dimension_subgroup(G, N, n)
            low = relative_lower_bound(G, N, n)
        s, o, e = subquotient(G, D, low)
        rep.rows.append(DimensionRow(n, D.order, low.order, s, o, e))
    return rep


__all__ = [
    "GroupRingElement", "IdealLattice", "aug_power", "aug_power_exhaustive", "relative_ideal",
    "dimension_subgroup", "relative_dimension_subgroup", "relative_lower_bound",
    "dimension_report", "DimensionReport", "DimensionRow", "right_multiply", "left_multiply",
    "is_two_sided", "subquotient", "RING_ORDER_CAP", "MAX_POWER",
]
