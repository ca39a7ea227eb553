"""Finite groups as multiplication tables, plus the example families.

Commutators follow ``[a, b] = a b a^-1 b^-1`` throughout.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .abelian import FPAbGroup

ORDER_CAP = 10**4


class GroupError(ValueError):
    pass


class ResourceCapError(GroupError):
    pass


class FiniteGroup:
    """Group on ``0..n-1`` with ``table[a, b] = a*b``."""

    def __init__(self, table, identity: int, generators: Sequence[int],
                 labels: Sequence[str] | None = None, name: str = "G", check: bool = True,
                 exhaustive: bool | None = None):
        T = np.asarray(table, dtype=np.int64)
        n = T.shape[0]
        if n > ORDER_CAP:
            raise ResourceCapError(f"order {n} exceeds cap {ORDER_CAP}")
        if T.shape != (n, n):
            raise GroupError("table must be square")
        self.table = T
        self.table.setflags(write=False)
        self.order = n
        self.identity = int(identity)
        self.generators = tuple(int(g) for g in generators)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.name = name
        inv = np.argmax(T == self.identity, axis=1)
        self.inverses = inv
        if check:
            self._validate(exhaustive)

    def _validate(self, exhaustive: bool | None) -> None:
        T, n, e = self.table, self.order, self.identity
        if T.min() < 0 or T.max() >= n:
            raise GroupError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)):
            raise GroupError("identity law fails")
        for row in T:
            if len(np.unique(row)) != n:
                raise GroupError("table rows are not permutations")
        if not (np.all(T[ar, self.inverses] == e) and np.all(T[self.inverses, ar] == e)):
            raise GroupError("inverse law fails")
        if exhaustive is None:
            exhaustive = n <= 128
        if exhaustive:
            left = T[T]                      # (a*b)*c as left[a, b, c]
            right = T[:, T]                  # a*(b*c) as right[a, b, c]
            if not np.array_equal(left, right):
                raise GroupError("table is not associative")
        else:
            rng = random.Random(0)
            for _ in range(2000):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if T[T[a, b], c] != T[a, T[b, c]]:
                    raise GroupError("table is not associative")
        if self.closure(self.generators).order != n:
            raise GroupError("generators do not generate the group")

    # -- elementwise ---------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def prod(self, *elts: int) -> int:
        out = self.identity
        for x in elts:
            out = int(self.table[out, x])
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        base = a
        while k:
            if k & 1:
                out = int(self.table[out, base])
            base = int(self.table[base, base])
            k >>= 1
        return out

    def comm(self, a: int, b: int) -> int:
        """``[a, b] = a b a^-1 b^-1``."""
        return self.prod(a, b, self.inv(a), self.inv(b))

    def conj(self, g: int, h: int) -> int:
        """``g h g^-1``."""
        return self.prod(g, h, self.inv(g))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        from math import lcm
        e = 1
        for a in range(self.order):
            e = lcm(e, self.element_order(a))
        return e

    # -- subgroups -----------------------------------------------------------

    def closure(self, S: Iterable[int]) -> "Subgroup":
        S = sorted(set(int(s) for s in S))
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = [self.identity]
        gens = np.array(S, dtype=np.int64)
        if len(gens):
            while frontier:
                f = np.array(frontier, dtype=np.int64)
                new = self.table[np.ix_(f, gens)].ravel()
                new = np.unique(new[~seen[new]])
                seen[new] = True
                frontier = new.tolist()
        return Subgroup(self, np.flatnonzero(seen))

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def normal_closure(self, S: Iterable[int]) -> "Subgroup":
        H = self.closure(S)
        while True:
            conj = set(H.elements_list)
            for g in self.generators:
                gi = self.inv(g)
                conj.update(self.table[self.table[g, H.elements], gi].tolist())
            K = self.closure(conj)
            if K == H:
                return H
            H = K

    def commutator_subgroup(self, A: "Subgroup", B: "Subgroup") -> "Subgroup":
        """Subgroup generated by all ``[a, b]``."""
        a = A.elements
        b = B.elements
        T, inv = self.table, self.inverses
        ab = T[np.ix_(a, b)]
        c = T[T[ab, inv[a][:, None]], inv[b][None, :]]
        return self.closure(np.unique(c).tolist())

    def is_normal(self, N: "Subgroup") -> bool:
        mask = N.mask
        for g in self.generators:
            gi = self.inv(g)
            if not mask[self.table[self.table[g, N.elements], gi]].all():
                return False
        return True

    @cached_property
    def lower_central_series(self) -> tuple["Subgroup", ...]:
        """``gamma_1 = G, gamma_{n+1} = [gamma_n, G]`` until it stabilises."""
        terms = [self.whole()]
        G = self.whole()
        while True:
            nxt = self.commutator_subgroup(terms[-1], G)
            if nxt == terms[-1]:
                break
            terms.append(nxt)
        return tuple(terms)

    def gamma(self, n: int) -> "Subgroup":
        lcs = self.lower_central_series
        return lcs[n - 1] if n <= len(lcs) else lcs[-1]

    @property
    def is_nilpotent(self) -> bool:
        return self.lower_central_series[-1].order == 1

    @property
    def nilpotency_class(self) -> int:
        if not self.is_nilpotent:
            raise GroupError("group is not nilpotent")
        return len(self.lower_central_series) - 1

    @property
    def derived_subgroup(self) -> "Subgroup":
        return self.gamma(2)

    # -- quotients -----------------------------------------------------------

    def quotient(self, N: "Subgroup", name: str | None = None) -> tuple["FiniteGroup", np.ndarray]:
        """``G/N`` with cosets indexed by their minimal element's rank; returns the projection array."""
        if not self.is_normal(N):
            raise GroupError("subgroup is not normal")
        n = self.order
        proj = -np.ones(n, dtype=np.int64)
        reps = []
        for g in range(n):
            if proj[g] < 0:
                coset = self.table[g, N.elements]
                proj[coset] = len(reps)
                reps.append(g)
        reps_arr = np.array(reps, dtype=np.int64)
        Q = proj[self.table[np.ix_(reps_arr, reps_arr)]]
        gens = sorted(set(int(proj[g]) for g in self.generators if proj[g] != proj[self.identity]))
        labels = [self.labels[r] for r in reps]
        quo = FiniteGroup(Q, int(proj[self.identity]), gens or [int(proj[self.identity])],
                          labels, name or f"{self.name}/N")
        return quo, proj

    def abelianization(self) -> tuple[FPAbGroup, list[list[int]]]:
        """``G_ab`` on the generators of ``G`` and the coordinates of every element."""
        Q, proj = self.quotient(self.derived_subgroup)
        gens_img = [int(proj[g]) for g in self.generators]
        A, coords = abelian_group_from_elements(Q, gens_img, [self.labels[g] for g in self.generators])
        return A, [coords[int(proj[g])] for g in range(self.order)]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def abelian_group_from_elements(Q: FiniteGroup, gens: Sequence[int], labels: Sequence[str]
                                ) -> tuple[FPAbGroup, list[list[int]]]:
    """Present an abelian group ``Q`` on ``gens`` via a BFS spanning tree.

    Tree edges fix coordinates; every other edge ``v -> v*g_i`` contributes the
    relation ``c_v + e_i - c_{v g_i}``.
    """
    k = len(gens)
    coords: list[list[int] | None] = [None] * Q.order
    coords[Q.identity] = [0] * k
    queue = deque([Q.identity])
    rels = []
    while queue:
        v = queue.popleft()
        for i, g in enumerate(gens):
            w = Q.mul(v, g)
            cand = list(coords[v])
            cand[i] += 1
            if coords[w] is None:
                coords[w] = cand
                queue.append(w)
            else:
                r = [a - b for a, b in zip(cand, coords[w])]
                if any(r):
                    rels.append(r)
    if any(c is None for c in coords):
        raise GroupError("given elements do not generate the group")
    A = FPAbGroup(list(labels), rels)
    if A.order() != Q.order:
        raise GroupError("presentation does not match group order")
    return A, coords  # type: ignore[return-value]


class Subgroup:
    __slots__ = ("parent", "elements", "mask", "__dict__")

    def __init__(self, parent: FiniteGroup, elements):
        self.parent = parent
        arr = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                                   dtype=np.int64))
        self.elements = arr
        mask = np.zeros(parent.order, dtype=bool)
        mask[arr] = True
        self.mask = mask

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def elements_list(self) -> list[int]:
        return self.elements.tolist()

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(self.elements, other.elements))

    def __hash__(self) -> int:
        return hash(self.elements.tobytes())

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def join(self, other: "Subgroup") -> "Subgroup":
        return self.parent.closure(np.concatenate([self.elements, other.elements]).tolist())

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.elements[other.mask[self.elements]])

    def is_subgroup(self) -> bool:
        T = self.parent.table
        prods = T[np.ix_(self.elements, self.elements)]
        return bool(self.mask[prods].all())

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} in {self.parent.name})"


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    """``H`` as a group in its own right, with the embedding of indices.

    Generators are picked greedily in index order, which keeps them few.
    """
    elems = H.elements_list
    emb = {g: i for i, g in enumerate(elems)}
    sub = H.elements
    T = np.searchsorted(sub, G.table[np.ix_(sub, sub)])
    chosen: list[int] = []
    cur = G.trivial()
    for g in elems:
        if g not in cur:
            chosen.append(g)
            cur = G.closure(chosen)
    gens = [emb[g] for g in chosen] or [emb[G.identity]]
    inner = FiniteGroup(T, emb[G.identity], gens, [G.labels[g] for g in elems], "sub", check=False)
    return inner, emb


def abelian_subgroup(G: FiniteGroup, H: Subgroup) -> tuple[FPAbGroup, dict[int, list[int]], list[int]]:
    """Presentation of an abelian subgroup, coordinates of its elements, and its generators in ``G``."""
    inner, emb = subgroup_as_group(G, H)
    c = G.commutator_subgroup(H, H)
    if c.order != 1:
        raise GroupError("subgroup is not abelian")
    gens_G = [g for g in H.elements_list if emb[g] in inner.generators]
    A, coords = abelian_group_from_elements(inner, list(inner.generators),
                                            [G.labels[g] for g in gens_G])
    return A, {g: coords[emb[g]] for g in H.elements_list}, gens_G


# ---------------------------------------------------------------------------
# constructions


def from_normal_forms(elements: Sequence[Hashable], mul: Callable, identity: Hashable,
                      generators: Sequence[Hashable], name: str, label: Callable | None = None
                      ) -> FiniteGroup:
    if len(elements) > ORDER_CAP:
        raise ResourceCapError(f"order {len(elements)} exceeds cap {ORDER_CAP}")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    T = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            T[i, j] = index[mul(a, b)]
    labels = [label(e) if label else str(e) for e in elements]
    return FiniteGroup(T, index[identity], [index[g] for g in generators], labels, name)


def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise GroupError("cyclic group needs m >= 1")
    T = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    return FiniteGroup(T, 0, [1 % m], [f"x^{i}" for i in range(m)], f"cyclic({m})")


def abelian_group(*orders: int) -> FiniteGroup:
    if not orders:
        return cyclic_group(1)
    G = cyclic_group(orders[0])
    for m in orders[1:]:
        G = direct_product(G, cyclic_group(m))
    G.name = f"abelian({','.join(map(str, orders))})"
    return G


def heisenberg(m: int) -> FiniteGroup:
    """Class-2 group of order ``m^3`` with normal form ``x^a y^b z^c``, ``z = [x, y]``."""
    elems = [(a, b, c) for a in range(m) for b in range(m) for c in range(m)]

    def mul(u, v):
        a, b, c = u
        a2, b2, c2 = v
        return ((a + a2) % m, (b + b2) % m, (c + c2 - b * a2) % m)

    G = from_normal_forms(elems, mul, (0, 0, 0), [(1 % m, 0, 0), (0, 1 % m, 0)],
                          f"heisenberg({m})", lambda e: f"x^{e[0]}y^{e[1]}z^{e[2]}")
    x, y = G.generators
    z = G.comm(x, y)
    if G.labels[z] != f"x^0y^0z^{1 % m}":
        raise GroupError("collection rule does not give [x,y] = z")
    for rel in (G.power(x, m), G.power(y, m), G.comm(x, z), G.comm(y, z)):
        if rel != G.identity:
            raise GroupError("presentation relation fails")
    return G


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``n`` (``n = 2m``)."""
    if n % 2 or n < 2:
        raise GroupError("dihedral order must be even")
    m = n // 2
    elems = [(k, e) for e in range(2) for k in range(m)]

    def mul(u, v):
        return ((u[0] + (-1) ** u[1] * v[0]) % m, (u[1] + v[1]) % 2)

    return from_normal_forms(elems, mul, (0, 0), [(1 % m, 0), (0, 1)], f"dihedral({n})",
                             lambda e: f"r^{e[0]}s^{e[1]}")


def quaternion(n: int) -> FiniteGroup:
    """Dicyclic group of order ``n = 4m``: ``a^{2m} = 1, b^2 = a^m, b a b^-1 = a^-1``."""
    if n % 4 or n < 4:
        raise GroupError("quaternion order must be a multiple of 4")
    m = n // 4
    elems = [(k, e) for e in range(2) for k in range(2 * m)]

    def mul(u, v):
        k = u[0] + (-1) ** u[1] * v[0] + (m if u[1] and v[1] else 0)
        return (k % (2 * m), (u[1] + v[1]) % 2)

    return from_normal_forms(elems, mul, (0, 0), [(1, 0), (0, 1)], f"quaternion({n})",
                             lambda e: f"a^{e[0]}b^{e[1]}")


def semidihedral(n: int) -> FiniteGroup:
    """Semidihedral group of order ``n = 2^k >= 16``: ``s r s = r^{n/4 - 1}``."""
    if n < 16 or n & (n - 1):
        raise GroupError("semidihedral order must be a power of two >= 16")
    m = n // 2
    t = n // 4 - 1
    elems = [(k, e) for e in range(2) for k in range(m)]

    def mul(u, v):
        return ((u[0] + pow(t, u[1]) * v[0]) % m, (u[1] + v[1]) % 2)

    return from_normal_forms(elems, mul, (0, 0), [(1, 0), (0, 1)], f"semidihedral({n})",
                             lambda e: f"r^{e[0]}s^{e[1]}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    n1, n2 = G.order, H.order
    if n1 * n2 > ORDER_CAP:
        raise ResourceCapError(f"order {n1 * n2} exceeds cap {ORDER_CAP}")
    T = (G.table[:, None, :, None] * n2 + H.table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    gens = [g * n2 + H.identity for g in G.generators] + [G.identity * n2 + h for h in H.generators]
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    return FiniteGroup(T, G.identity * n2 + H.identity, gens, labels, f"{G.name}*{H.name}")


def group_from_file(path: str) -> FiniteGroup:
    with open(path) as fh:
        data = json.load(fh)
    return group_from_dict(data)


def group_from_dict(data: dict) -> FiniteGroup:
    try:
        n = int(data["order"])
        flat = [int(v) for v in data["table"]]
        identity = int(data["identity"])
        gens = [int(g) for g in data["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed group table document: {exc}") from None
    if n > ORDER_CAP:
        raise ResourceCapError(f"order {n} exceeds cap {ORDER_CAP}")
    if len(flat) != n * n:
        raise GroupError("table length is not order^2")
    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise GroupError("label count does not match order")
    return FiniteGroup(np.array(flat).reshape(n, n), identity, gens, labels, data.get("name", "file"))


def group_to_dict(G: FiniteGroup) -> dict:
    return {
        "name": G.name,
        "order": G.order,
        "table": G.table.ravel().tolist(),
        "identity": G.identity,
        "generators": list(G.generators),
        "labels": list(G.labels),
    }


# ---------------------------------------------------------------------------
# families


@dataclass
class FamilyGroup:
    group: FiniteGroup
    subgroup: Subgroup | None = None
    spec: str = ""


def cex(p: int, r: int, s: int) -> FamilyGroup:
    """Relative counterexample: ``E = heisenberg(p^{s+1})``, ``N = <x^{p^r}, y^{p^s}, [x,y]>``."""
    if not 0 < r <= s:
        raise GroupError("cex needs 0 < r <= s")
    E = heisenberg(p ** (s + 1))
    x, y = E.generators
    N = E.closure([E.power(x, p ** r), E.power(y, p ** s), E.comm(x, y)])
    if not E.is_normal(N):
        raise GroupError("N is not normal")
    E.name = f"cex({p},{r},{s})"
    return FamilyGroup(E, N, f"cex:{p},{r},{s}")


def _ints(args: str) -> list[int]:
    try:
        return [int(a) for a in args.split(",") if a.strip()]
    except ValueError:
        raise GroupError(f"bad integer list {args!r}") from None


def build_family(spec: str) -> FamilyGroup:
    """Parse ``name:args`` specs such as ``cex:2,1,1``; ``*`` joins direct factors."""
    spec = spec.strip()
    if "*" in spec:
        parts = [build_family(s) for s in spec.split("*")]
        G = parts[0].group
        for p in parts[1:]:
            G = direct_product(G, p.group)
        G.name = spec
        return FamilyGroup(G, None, spec)
    name, _, args = spec.partition(":")
    name = name.strip().lower()
    if name == "file":
        G = group_from_file(args)
        return FamilyGroup(G, None, spec)
    vals = _ints(args)
    makers = {
        "cyclic": lambda v: cyclic_group(*v),
        "abelian": lambda v: abelian_group(*v),
        "heisenberg": lambda v: heisenberg(*v),
        "dihedral": lambda v: dihedral(*v),
        "quaternion": lambda v: quaternion(*v),
        "semidihedral": lambda v: semidihedral(*v),
    }
    if name == "cex":
        if len(vals) != 3:
            raise GroupError("cex needs p,r,s")
        return cex(*vals)
    if name not in makers:
        raise GroupError(f"unknown group family {name!r}")
    _guard(name, vals)
    try:
        G = makers[name](vals)
    except TypeError:
        raise GroupError(f"wrong number of parameters for {name}") from None
    G.name = spec
    return FamilyGroup(G, None, spec)


def _guard(name: str, vals: list[int]) -> None:
    order = 1
    if name == "heisenberg" and vals:
        order = vals[0] ** 3
    elif name == "abelian":
        for v in vals:
            order *= v
    elif vals:
        order = vals[0]
    if order > ORDER_CAP:
        raise ResourceCapError(f"order {order} exceeds cap {ORDER_CAP}")


__all__ = [
    "FiniteGroup", "Subgroup", "GroupError", "ResourceCapError", "ORDER_CAP", "cyclic_group",
    "abelian_group", "heisenberg", "dihedral", "quaternion", "semidihedral", "direct_product",
    "group_from_file", "group_from_dict", "group_to_dict", "build_family", "FamilyGroup", "cex",
    "abelian_group_from_elements", "from_normal_forms", "subgroup_as_group", "abelian_subgroup",
]
