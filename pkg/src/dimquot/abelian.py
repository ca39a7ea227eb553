"""Finitely presented abelian groups, homomorphisms and basic bifunctors.

Elements are integer row vectors in generator coordinates and homomorphisms
act on the right: ``x -> x @ M``, so row ``i`` of ``M`` is the image of
generator ``i``.

Every group carries a Smith decomposition. Writing ``U R V = D`` for the
relation matrix ``R``, the vector ``x V`` gives coordinates along cyclic
factors of orders ``D[i][i]`` (0 for free factors); factors of order 1 are
dropped. This "canonical" coordinate system is what the structural functors
(Tor, Gamma, Omega) are built on.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .linalg import (
    Lattice,
    LatticeError,
    hnf_auto,
    left_kernel,
    snf_with_inverse,
    solve_left,
    vecmat,
)

ENUMERATION_CAP = 10**6


class AbelianGroupError(ValueError):
    pass


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


class FPAbGroup:
    """Abelian group ``Z^k / rowspan(relations)`` with named generators."""

    def __init__(self, labels: Sequence[str] | int, relations: Iterable[Sequence[int]] = (),
                 *, relation_lattice: Lattice | None = None):
        if isinstance(labels, int):
            labels = [f"e{i}" for i in range(labels)]
        self.labels = tuple(labels)
        k = len(self.labels)
        if relation_lattice is not None:
            if relation_lattice.ambient_rank != k:
                raise AbelianGroupError("relation width does not match generator count")
            self.rel = relation_lattice
        else:
            rows = [list(r) for r in relations]
            for r in rows:
                if len(r) != k:
                    raise AbelianGroupError(
                        f"relator of width {len(r)} for {k} generators")
            self.rel = hnf_auto(rows, k) if rows else Lattice.zero(k)
        self._smith()

    # -- structure ---------------------------------------------------------

    def _smith(self) -> None:
        k = self.ngens
        basis = [list(r) for r in self.rel.basis]
        if basis:
            D, _, V, Vi = snf_with_inverse(basis)
            diag = [D[i][i] for i in range(len(basis))]
        else:
            V = [[int(i == j) for j in range(k)] for i in range(k)]
            Vi = [row[:] for row in V]
            diag = []
        diag = diag + [0] * (k - len(diag))
        slots = [i for i, d in enumerate(diag) if d != 1]
        self._V = V
        self._Vi = Vi
        self._slots = slots
        self.invariants = tuple(diag[i] for i in slots)  # 0 marks a free factor
        # column j of V restricted to slots: canonical coordinate j of generator i
        self._to_can = [[V[i][j] for j in slots] for i in range(k)]
        self._from_can = [list(Vi[j]) for j in slots]

    @property
    def ngens(self) -> int:
        return len(self.labels)

    @property
    def torsion_invariants(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def order(self) -> int:
        """Group order; 0 stands for infinite."""
        return 0 if not self.is_finite else prod(self.invariants)

    def exponent(self) -> int:
        if not self.is_finite:
            return 0
        e = 1
        for d in self.invariants:
            e = e * d // gcd(e, d)
        return e

    @cached_property
    def primary_decomposition(self) -> tuple[tuple[tuple[int, int], ...], int]:
        """Sorted ``(p, e)`` cyclic factors of order ``p**e`` plus the free rank."""
        parts = []
        for d in self.torsion_invariants:
            parts.extend(_factor(d))
        return tuple(sorted(parts)), self.free_rank

    def structure(self) -> str:
        """Human readable form such as ``Z/2 + Z/4 + Z``."""
        if self.is_trivial:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariants)

    def __repr__(self) -> str:
        return f"FPAbGroup({self.structure()}; {self.ngens} gens)"

    def isomorphic(self, other: "FPAbGroup") -> bool:
        return self.invariants == other.invariants

    # -- elements ------------------------------------------------------------

    def _check(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.ngens:
            raise AbelianGroupError(f"element of length {len(x)} in group with {self.ngens} generators")
        return [int(v) for v in x]

    def to_canonical(self, x: Sequence[int]) -> tuple[int, ...]:
        """Reduced canonical coordinates; equal elements give equal tuples."""
        x = self._check(x)
        y = vecmat(x, self._to_can, len(self._slots))
        return tuple(v % d if d else v for v, d in zip(y, self.invariants))

    def from_canonical(self, y: Sequence[int]) -> list[int]:
        return vecmat(list(y), self._from_can, self.ngens)

    def normal_form(self, x: Sequence[int]) -> list[int]:
        return self.from_canonical(self.to_canonical(x))

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.to_canonical(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(x, y)])

    def zero(self) -> list[int]:
        return [0] * self.ngens

    def gen(self, i: int) -> list[int]:
        v = [0] * self.ngens
        v[i] = 1
        return v

    def canonical_generator(self, j: int) -> list[int]:
        """Generator of the ``j``-th cyclic factor, in generator coordinates."""
        return list(self._from_can[j])

    def element_order(self, x: Sequence[int]) -> int:
        """Order of ``x``; 0 when ``x`` has infinite order."""
        y = self.to_canonical(x)
        o = 1
        for v, d in zip(y, self.invariants):
            if d == 0:
                if v:
                    return 0
                continue
            od = d // gcd(v, d)
            o = o * od // gcd(o, od)
        return o

    def torsion_canonical_elements(self) -> Iterator[tuple[int, ...]]:
        """All elements of the torsion subgroup, as canonical tuples."""
        tors = [d if d else 1 for d in self.invariants]
        if prod(tors) > ENUMERATION_CAP:
            raise AbelianGroupError("torsion subgroup too large to enumerate")
        return itertools.product(*[range(d) for d in tors])

    def elements(self) -> Iterator[list[int]]:
        """Enumerate a finite group (one generator-coordinate vector per element)."""
        if not self.is_finite:
            raise AbelianGroupError("cannot enumerate an infinite group")
        if self.order() > ENUMERATION_CAP:
            raise AbelianGroupError(f"order {self.order()} exceeds enumeration cap")
        for y in self.torsion_canonical_elements():
            yield self.from_canonical(y)

    def torsion_elements(self) -> Iterator[list[int]]:
        for y in self.torsion_canonical_elements():
            yield self.from_canonical(y)

    def random_element(self, rng) -> list[int]:
        y = [rng.randrange(d) if d else rng.randrange(-3, 4) for d in self.invariants]
        return self.from_canonical(y)

    # -- constructions -------------------------------------------------------

    def quotient(self, elements: Iterable[Sequence[int]]) -> "FPAbGroup":
        rows = [list(r) for r in self.rel.basis] + [self._check(e) for e in elements]
        return FPAbGroup(self.labels, rows)

    def subgroup(self, elements: Sequence[Sequence[int]], labels=None) -> tuple["FPAbGroup", "AbHom"]:
        """Subgroup generated by ``elements`` with its inclusion."""
        elements = [self._check(e) for e in elements]
        s = len(elements)
        free = FPAbGroup(labels or [f"s{i}" for i in range(s)])
        inc = AbHom(free, self, elements)
        dec = hom_decompose(inc)
        return dec.image, dec.image_inclusion


def cyclic(n: int, label: str = "e") -> FPAbGroup:
    return FPAbGroup([label], [[n]] if n else [])


def direct_sum(*groups: FPAbGroup) -> FPAbGroup:
    labels = []
    rows = []
    offset = 0
    total = sum(g.ngens for g in groups)
    for gi, g in enumerate(groups):
        labels.extend(f"{l}.{gi}" for l in g.labels)
        for r in g.rel.basis:
            row = [0] * total
            row[offset:offset + g.ngens] = r
            rows.append(row)
        offset += g.ngens
    return FPAbGroup(labels, rows)


def abelian_from_invariants(orders: Sequence[int]) -> FPAbGroup:
    k = len(orders)
    rows = []
    for i, d in enumerate(orders):
        if d:
            row = [0] * k
            row[i] = d
            rows.append(row)
    return FPAbGroup([f"u{i}" for i in range(k)], rows)


_SPEC_TERM = re.compile(r"^\s*Z(?:\s*/\s*(\d+))?\s*$")


def parse_abelian(spec: str) -> FPAbGroup:
    """Parse strings such as ``"Z/2+Z/4+Z"`` (``"0"`` is the trivial group)."""
    spec = spec.strip()
    if spec in ("0", "1", ""):
        return FPAbGroup([])
    orders = []
    for term in spec.split("+"):
        m = _SPEC_TERM.match(term)
        if not m:
            raise AbelianGroupError(f"cannot parse abelian group term {term!r}")
        orders.append(int(m.group(1)) if m.group(1) is not None else 0)
    if any(o < 0 for o in orders):
        raise AbelianGroupError("orders must be non-negative")
    return abelian_from_invariants(orders)


def all_abelian_invariants(n: int) -> list[tuple[int, ...]]:
    """Invariant factor lists (d1 | d2 | ...) of all abelian groups of order ``n``."""
    per_prime = []
    for p, e in _factor(n):
        per_prime.append([[p ** a for a in part] for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime) if per_prime else [()]:
        length = max((len(c) for c in combo), default=0)
        inv = [1] * length
        for part in combo:
            # largest prime power goes to the largest invariant factor
            for i, q in enumerate(sorted(part, reverse=True)):
                inv[length - 1 - i] *= q
        out.append(tuple(inv))
    return sorted(out)


def _partitions(n: int, maxpart: int | None = None) -> list[list[int]]:
    if maxpart is None:
        maxpart = n
    if n == 0:
        return [[]]
    out = []
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            out.append([k] + rest)
    return out


# ---------------------------------------------------------------------------
# homomorphisms


class AbHom:
    """Homomorphism given by images of the domain generators."""

    def __init__(self, domain: FPAbGroup, codomain: FPAbGroup, matrix: Sequence[Sequence[int]],
                 check: bool = True):
        self.domain = domain
        self.codomain = codomain
        M = [[int(v) for v in row] for row in matrix]
        if len(M) != domain.ngens or any(len(r) != codomain.ngens for r in M):
            raise AbelianGroupError("matrix shape does not match domain/codomain generators")
        self.matrix = M
        if check:
            for r in domain.rel.basis:
                if not codomain.rel.contains(vecmat(r, M, codomain.ngens)):
                    raise AbelianGroupError("homomorphism is not well defined on relations")

    def __call__(self, x: Sequence[int]) -> list[int]:
        return vecmat(list(x), self.matrix, self.codomain.ngens)

    def compose(self, other: "AbHom") -> "AbHom":
        """``self after other``."""
        return AbHom(other.domain, self.codomain,
                     [self(r) for r in other.matrix], check=False)

    def __add__(self, other: "AbHom") -> "AbHom":
        return AbHom(self.domain, self.codomain,
                     [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)],
                     check=False)

    def __neg__(self) -> "AbHom":
        return AbHom(self.domain, self.codomain, [[-a for a in r] for r in self.matrix], check=False)

    def __sub__(self, other: "AbHom") -> "AbHom":
        return self + (-other)

    def scale(self, c: int) -> "AbHom":
        return AbHom(self.domain, self.codomain, [[c * a for a in r] for r in self.matrix], check=False)

    def equals(self, other: "AbHom") -> bool:
        return all(self.codomain.equal(r, s) for r, s in zip(self.matrix, other.matrix))

    def is_zero(self) -> bool:
        return all(self.codomain.is_zero(r) for r in self.matrix)

    def decompose(self) -> "HomDecomposition":
        return hom_decompose(self)

    def is_injective(self) -> bool:
        return self.decompose().kernel.is_trivial

    def is_surjective(self) -> bool:
        return self.decompose().cokernel.is_trivial

    def is_isomorphism(self) -> bool:
        d = self.decompose()
        return d.kernel.is_trivial and d.cokernel.is_trivial


def identity_hom(A: FPAbGroup) -> AbHom:
    return AbHom(A, A, [A.gen(i) for i in range(A.ngens)], check=False)


def zero_hom(A: FPAbGroup, B: FPAbGroup) -> AbHom:
    return AbHom(A, B, [B.zero() for _ in range(A.ngens)], check=False)


@dataclass(frozen=True)
class HomDecomposition:
    kernel: FPAbGroup
    kernel_inclusion: AbHom
    kernel_lattice: Lattice  # preimage of the codomain relations, in domain generator coords
    image: FPAbGroup
    image_inclusion: AbHom
    cokernel: FPAbGroup
    cokernel_projection: AbHom


def hom_decompose(f: AbHom) -> HomDecomposition:
    A, B = f.domain, f.codomain
    k = A.ngens
    rows = [list(r) for r in f.matrix] + [list(r) for r in B.rel.basis]
    if k == 0:
        K = Lattice.zero(0)
    else:
        kern = left_kernel(rows, len(rows)) if rows and B.ngens else [
            [int(i == j) for j in range(len(rows))] for i in range(len(rows))]
        K = Lattice.from_generators([r[:k] for r in kern], k) if kern else Lattice.zero(k)
    # kernel group: generators are the K basis, relations are the domain relations in K coords
    kb = [list(r) for r in K.basis]
    rel_coords = []
    for r in A.rel.basis:
        c = K.coordinates(r)
        if c is None:
            raise LatticeError("domain relations must lie in the kernel lattice")
        rel_coords.append(c)
    kernel = FPAbGroup([f"k{i}" for i in range(len(kb))], rel_coords)
    kernel_inc = AbHom(kernel, A, kb, check=False)
    image = FPAbGroup(A.labels, relation_lattice=K)
    image_inc = AbHom(image, B, f.matrix, check=False)
    cok = FPAbGroup(B.labels, [list(r) for r in B.rel.basis] + [list(r) for r in f.matrix])
    proj = AbHom(B, cok, [B.gen(i) for i in range(B.ngens)], check=False)
    return HomDecomposition(kernel, kernel_inc, K, image, image_inc, cok, proj)


def preimage_coordinates(inc: AbHom, v: Sequence[int]) -> list[int] | None:
    """Some ``x`` in the domain of ``inc`` with ``inc(x) = v`` in the codomain, else None."""
    B = inc.codomain
    rows = [list(r) for r in inc.matrix] + [list(r) for r in B.rel.basis]
    x = solve_left(rows, list(v)) if rows else (None if any(v) else [])
    if x is None:
        return None
    return x[: inc.domain.ngens]


def factor_through(g: AbHom, inc: AbHom) -> AbHom:
    """The map ``h`` with ``inc o h = g``, given ``g`` lands in the image of ``inc``."""
    rows = []
    for v in g.matrix:
        x = preimage_coordinates(inc, v)
        if x is None:
            raise AbelianGroupError("map does not factor through the given inclusion")
        rows.append(x)
    return AbHom(g.domain, inc.domain, rows)


def subgroup_lattice(A: FPAbGroup, elements: Iterable[Sequence[int]]) -> Lattice:
    """Lattice in generator coordinates of ``<elements> + relations``."""
    rows = [list(r) for r in A.rel.basis] + [list(e) for e in elements]
    return hnf_auto(rows, A.ngens) if rows else Lattice.zero(A.ngens)


def subgroup_order(A: FPAbGroup, elements: Iterable[Sequence[int]]) -> int:
    """Order of the subgroup generated by ``elements`` in a finite group."""
    L = subgroup_lattice(A, elements)
    Q = FPAbGroup(A.labels, relation_lattice=L)
    return A.order() // Q.order()


# ---------------------------------------------------------------------------
# tensor, exterior, symmetric powers


@dataclass(frozen=True)
class TensorPower:
    """``A^{(x)n}`` on tuples of generator indices (lexicographic order)."""

    base: FPAbGroup
    n: int
    group: FPAbGroup
    index: dict

    def pure(self, *vectors: Sequence[int]) -> list[int]:
        """Coordinates of ``v1 (x) ... (x) vn``."""
        out = [0] * self.group.ngens
        supports = [[(i, c) for i, c in enumerate(v) if c] for v in vectors]
        for combo in itertools.product(*supports):
            coef = 1
            for _, c in combo:
                coef *= c
            out[self.index[tuple(i for i, _ in combo)]] += coef
        return out


@lru_cache(maxsize=256)
def _tensor_power_cached(base: FPAbGroup, n: int) -> TensorPower:
    k = base.ngens
    words = list(itertools.product(range(k), repeat=n))
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for pos in range(n):
        for r in base.rel.basis:
            for rest in itertools.product(range(k), repeat=n - 1):
                row = [0] * len(words)
                for i, c in enumerate(r):
                    if c:
                        row[index[rest[:pos] + (i,) + rest[pos:]]] += c
                rows.append(row)
    labels = ["(x)".join(base.labels[i] for i in w) for w in words]
    return TensorPower(base, n, FPAbGroup(labels, rows), index)


def tensor_power(A: FPAbGroup, n: int) -> TensorPower:
    if n < 1:
        raise AbelianGroupError("tensor power needs n >= 1")
    return _tensor_power_cached(A, n)


@dataclass(frozen=True)
class Tensor:
    left: FPAbGroup
    right: FPAbGroup
    group: FPAbGroup

    def pure(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        kb = self.right.ngens
        out = [0] * self.group.ngens
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i * kb + j] += x * y
        return out

    def map(self, f: AbHom, g: AbHom, target: "Tensor") -> AbHom:
        rows = []
        for i in range(self.left.ngens):
            for j in range(self.right.ngens):
                rows.append(target.pure(f.matrix[i], g.matrix[j]))
        return AbHom(self.group, target.group, rows)


def tensor(A: FPAbGroup, B: FPAbGroup) -> Tensor:
    ka, kb = A.ngens, B.ngens
    rows = []
    for r in A.rel.basis:
        for j in range(kb):
            row = [0] * (ka * kb)
            for i, c in enumerate(r):
                row[i * kb + j] = c
            rows.append(row)
    for s in B.rel.basis:
        for i in range(ka):
            row = [0] * (ka * kb)
            for j, c in enumerate(s):
                row[i * kb + j] = c
            rows.append(row)
    labels = [f"{a}(x){b}" for a in A.labels for b in B.labels]
    return Tensor(A, B, FPAbGroup(labels, rows))


@dataclass(frozen=True)
class Exterior:
    """``Lambda^2(A)`` on generators ``e_i ^ e_j`` with ``i < j``."""

    base: FPAbGroup
    group: FPAbGroup
    index: dict

    def wedge(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        out = [0] * len(self.index)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y and i != j:
                        if i < j:
                            out[self.index[(i, j)]] += x * y
                        else:
                            out[self.index[(j, i)]] -= x * y
        return out

    def map(self, f: AbHom, target: "Exterior") -> AbHom:
        rows = [target.wedge(f.matrix[i], f.matrix[j]) for (i, j) in self.index]
        return AbHom(self.group, target.group, rows)


@lru_cache(maxsize=256)
def lambda2(A: FPAbGroup) -> Exterior:
    k = A.ngens
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    index = {p: n for n, p in enumerate(pairs)}
    ext = Exterior(A, FPAbGroup([], []), index)
    rows = []
    for r in A.rel.basis:
        for j in range(k):
            rows.append(ext.wedge(r, A.gen(j)))
    labels = [f"{A.labels[i]}^{A.labels[j]}" for i, j in pairs]
    return Exterior(A, FPAbGroup(labels, rows), index)


@dataclass(frozen=True)
class SymmetricPower:
    """``SP^n(A)`` on sorted index tuples (monomials)."""

    base: FPAbGroup
    n: int
    group: FPAbGroup
    index: dict

    def monomial(self, *vectors: Sequence[int]) -> list[int]:
        out = [0] * len(self.index)
        supports = [[(i, c) for i, c in enumerate(v) if c] for v in vectors]
        for combo in itertools.product(*supports):
            coef = 1
            for _, c in combo:
                coef *= c
            out[self.index[tuple(sorted(i for i, _ in combo))]] += coef
        return out

    def projection(self, T: TensorPower) -> AbHom:
        """``s_n : A^{(x)n} -> SP^n(A)``."""
        rows = []
        for w in T.index:
            row = [0] * self.group.ngens
            row[self.index[tuple(sorted(w))]] = 1
            rows.append(row)
        return AbHom(T.group, self.group, rows)

    def map(self, f: AbHom, target: "SymmetricPower") -> AbHom:
        rows = [target.monomial(*[f.matrix[i] for i in mono]) for mono in self.index]
        return AbHom(self.group, target.group, rows)


@lru_cache(maxsize=256)
def sp(A: FPAbGroup, n: int) -> SymmetricPower:
    if n < 1:
        raise AbelianGroupError("SP^n needs n >= 1")
    k = A.ngens
    monos = list(itertools.combinations_with_replacement(range(k), n))
    index = {m: i for i, m in enumerate(monos)}
    shell = SymmetricPower(A, n, FPAbGroup([], []), index)
    rows = []
    lower = list(itertools.combinations_with_replacement(range(k), n - 1))
    for r in A.rel.basis:
        for m in lower:
            rows.append(shell.monomial(r, *[A.gen(i) for i in m]))
    labels = ["*".join(A.labels[i] for i in m) for m in monos]
    return SymmetricPower(A, n, FPAbGroup(labels, rows), index)


# ---------------------------------------------------------------------------
# Tor


def tor_coefficient(d: int, c: int, m: int, alpha: int, gam: int) -> int:
    """Coordinate of ``tau_m(alpha u, gam v)`` in ``Tor(Z/d, Z/c)``.

    The generator is ``tau_g((d/g) u, (c/g) v)`` with ``g = gcd(d, c)``.
    """
    g = gcd(d, c)
    num = (m * alpha)
    if num % d:
        raise AbelianGroupError("tau precondition violated: m*a != 0")
    y = (num // d) * gam
    step = c // g
    if y % step:
        raise AbelianGroupError("tau precondition violated: m*c != 0")
    return (y // step) % g


class TorGroup:
    """``Tor(A, C)`` on the canonical cyclic decompositions of ``A`` and ``C``.

    Generator ``(i, j)`` is ``tau_g((d_i/g) u_i, (c_j/g) v_j)`` of order
    ``g = gcd(d_i, c_j)``; pairs with ``g = 1`` or a free factor are omitted.
    """

    def __init__(self, A: FPAbGroup, C: FPAbGroup):
        self.A, self.C = A, C
        pairs = []
        for i, d in enumerate(A.invariants):
            for j, c in enumerate(C.invariants):
                if d and c and gcd(d, c) > 1:
                    pairs.append((i, j))
        self.pairs = pairs
        self.index = {p: n for n, p in enumerate(pairs)}
        orders = [gcd(A.invariants[i], C.invariants[j]) for i, j in pairs]
        self.orders = orders
        rows = []
        for n, g in enumerate(orders):
            row = [0] * len(pairs)
            row[n] = g
            rows.append(row)
        self.group = FPAbGroup([f"tau({i},{j})" for i, j in pairs], rows)

    def tau(self, a: Sequence[int], m: int, c: Sequence[int]) -> list[int]:
        """Coordinates of the symbol ``tau_m(a, c)``."""
        if m <= 0:
            raise AbelianGroupError("tau needs m > 0")
        A, C = self.A, self.C
        if not A.is_zero([m * v for v in a]):
            raise AbelianGroupError("tau precondition violated: m*a != 0")
        if not C.is_zero([m * v for v in c]):
            raise AbelianGroupError("tau precondition violated: m*c != 0")
        ya = A.to_canonical(a)
        yc = C.to_canonical(c)
        out = [0] * len(self.pairs)
        for n, (i, j) in enumerate(self.pairs):
            if ya[i] and yc[j]:
                out[n] = tor_coefficient(A.invariants[i], C.invariants[j], m, ya[i], yc[j])
        return out

    def generator_symbol(self, n: int) -> tuple[list[int], int, list[int]]:
        """``(a, m, c)`` with ``tau_m(a, c)`` equal to generator ``n``."""
        i, j = self.pairs[n]
        d, c = self.A.invariants[i], self.C.invariants[j]
        g = gcd(d, c)
        a = [(d // g) * v for v in self.A.canonical_generator(i)]
        cc = [(c // g) * v for v in self.C.canonical_generator(j)]
        return a, g, cc

    def map(self, f: AbHom, g: AbHom, target: "TorGroup") -> AbHom:
        """``Tor(f, g)``: ``tau_m(a, c) -> tau_m(f a, g c)``."""
        rows = []
        for n in range(len(self.pairs)):
            a, m, c = self.generator_symbol(n)
            rows.append(target.tau(f(a), m, g(c)))
        return AbHom(self.group, target.group, rows)

    def swap(self, target: "TorGroup") -> AbHom:
        """``Tor(A, C) -> Tor(C, A)``, ``tau_m(a, c) -> tau_m(c, a)``."""
        rows = []
        for n in range(len(self.pairs)):
            a, m, c = self.generator_symbol(n)
            rows.append(target.tau(c, m, a))
        return AbHom(self.group, target.group, rows)


def tor(A: FPAbGroup, C: FPAbGroup) -> TorGroup:
    return TorGroup(A, C)


def tor_presentation_model(A: FPAbGroup, C: FPAbGroup) -> FPAbGroup:
    """Tor as ``ker(R_A (x) C -> F_A (x) C)``; an independent cross-check."""
    k = A.ngens
    R = [list(r) for r in A.rel.basis]
    if not R:
        return FPAbGroup([])
    RA = FPAbGroup(len(R))
    FA = FPAbGroup(k)
    T1 = tensor(RA, C)
    T2 = tensor(FA, C)
    f = T1.map(AbHom(RA, FA, R), identity_hom(C), T2)
    return hom_decompose(f).kernel


# ---------------------------------------------------------------------------
# Whitehead functor Gamma


def _gamma_cyclic_order(d: int) -> int:
    if d == 0:
        return 0
    return 2 * d if d % 2 == 0 else d


@lru_cache(maxsize=None)
def gamma_cyclic_bruteforce(d: int) -> tuple[int, ...]:
    """Invariants of Gamma(Z/d) from generators ``gamma(x)``, all relations instantiated."""
    rows = []
    for x in range(d):
        row = [0] * d
        row[x] += 1
        row[(-x) % d] -= 1
        if any(row):
            rows.append(row)
    for x in range(d):
        for y in range(x, d):
            for z in range(y, d):
                row = [0] * d
                for s, c in (((x + y + z) % d, 1), ((x + y) % d, -1), ((x + z) % d, -1),
                             ((y + z) % d, -1), (x, 1), (y, 1), (z, 1)):
                    row[s] += c
                if any(row):
                    rows.append(row)
    return FPAbGroup(d, rows).invariants


class GammaGroup:
    """Whitehead's ``Gamma(A)`` built on the canonical decomposition.

    Generators: ``gamma(u_i)`` for every non-trivial factor and
    ``w(u_i (x) u_j) = gamma(u_i+u_j) - gamma(u_i) - gamma(u_j)`` for ``i < j``.
    """

    def __init__(self, A: FPAbGroup):
        self.A = A
        inv = A.invariants
        n = len(inv)
        self.cross = [(i, j) for i in range(n) for j in range(i + 1, n)
                      if gcd(inv[i], inv[j]) != 1]
        self.cross_index = {p: n + t for t, p in enumerate(self.cross)}
        orders = [_gamma_cyclic_order(d) for d in inv] + [gcd(inv[i], inv[j]) for i, j in self.cross]
        self.orders = orders
        rows = []
        for t, o in enumerate(orders):
            if o:
                row = [0] * len(orders)
                row[t] = o
                rows.append(row)
        labels = [f"gamma(u{i})" for i in range(n)] + [f"w(u{i},u{j})" for i, j in self.cross]
        self.group = FPAbGroup(labels, rows)

    def gamma(self, x: Sequence[int]) -> list[int]:
        y = self.A.to_canonical(x)
        out = [0] * self.group.ngens
        for i, v in enumerate(y):
            out[i] = v * v
        for (i, j), t in self.cross_index.items():
            out[t] = y[i] * y[j]
        return out

    def w(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        s = [a + b for a, b in zip(x, y)]
        gs, gx, gy = self.gamma(s), self.gamma(x), self.gamma(y)
        return [a - b - c for a, b, c in zip(gs, gx, gy)]

    def generator_symbol(self, t: int) -> list[tuple[int, list[int]]]:
        """Generator ``t`` as an integer combination of ``gamma(x)`` symbols."""
        A = self.A
        n = len(A.invariants)
        if t < n:
            return [(1, A.canonical_generator(t))]
        i, j = self.cross[t - n]
        ui, uj = A.canonical_generator(i), A.canonical_generator(j)
        return [(1, [a + b for a, b in zip(ui, uj)]), (-1, ui), (-1, uj)]

    def map(self, f: AbHom, target: "GammaGroup") -> AbHom:
        rows = []
        for t in range(self.group.ngens):
            row = [0] * target.group.ngens
            for c, x in self.generator_symbol(t):
                row = [a + c * b for a, b in zip(row, target.gamma(f(x)))]
            rows.append(row)
        return AbHom(self.group, target.group, rows)

    def w_map(self, T: Tensor) -> AbHom:
        """``w : A (x) A -> Gamma(A)``."""
        A = self.A
        rows = [self.w(A.gen(i), A.gen(j)) for i in range(A.ngens) for j in range(A.ngens)]
        return AbHom(T.group, self.group, rows)

    def delta_map(self, T: Tensor) -> AbHom:
        """``delta_gamma : Gamma(A) -> A (x) A``, ``gamma(x) -> x (x) x``."""
        rows = []
        for t in range(self.group.ngens):
            row = [0] * T.group.ngens
            for c, x in self.generator_symbol(t):
                row = [a + c * b for a, b in zip(row, T.pure(x, x))]
            rows.append(row)
        return AbHom(self.group, T.group, rows)


def gamma(A: FPAbGroup) -> GammaGroup:
    return GammaGroup(A)


__all__ = [
    "FPAbGroup", "AbHom", "HomDecomposition", "AbelianGroupError", "hom_decompose",
    "identity_hom", "zero_hom", "factor_through", "preimage_coordinates", "cyclic", "direct_sum",
    "abelian_from_invariants", "parse_abelian", "all_abelian_invariants", "tensor", "Tensor",
    "tensor_power", "TensorPower", "lambda2", "Exterior", "sp", "SymmetricPower", "tor",
    "TorGroup", "tor_presentation_model", "gamma", "GammaGroup", "gamma_cyclic_bruteforce",
    "subgroup_lattice", "subgroup_order",
]
