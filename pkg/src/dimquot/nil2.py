"""Class-2 machinery: ``c_2``, lifts, the maps ``delta, delta_1, delta_2, delta_3, beta``,
the relative ``D_3`` formula and the fourth dimension quotient bound.

Throughout ``Lambda^2(G_ab)`` is realised as ``L_2(G_ab)`` on Lyndon words
``(i, j)``, ``i < j``, so ``e_i ^ e_j`` is the bracket ``[e_i, e_j]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb, lcm
from typing import Callable, Sequence

import numpy as np

from .abelian import (
    AbHom,
    FPAbGroup,
    hom_decompose,
    preimage_coordinates,
    sp,
    tensor,
)
from .groupring import relative_dimension_subgroup, dimension_subgroup, relative_lower_bound
from .groups import FiniteGroup, GroupError, Subgroup, abelian_subgroup
from .liefun import bracket_expansion, commutator, lie_component, linear, Poly
from .linalg import Lattice
from .quadfun import ExtTorSquareModel


class NilpotencyError(GroupError):
    pass


@dataclass
class Class2Data:
    G: FiniteGroup
    Gab: FPAbGroup
    ab_coords: list                 # G element -> G_ab generator coordinates
    Gprime: FPAbGroup
    gp_coords: dict                 # G' element -> Gprime coordinates
    L2: object                      # LieComponent of degree 2 = Lambda^2(G_ab)
    c2: AbHom
    ker_c2: FPAbGroup
    ker_c2_inclusion: AbHom
    lift_table: dict                # canonical G_ab element -> lift in G
    f_choice: Callable[[int, Sequence[int]], list[int]] = field(repr=False)

    def lift(self, x: Sequence[int]) -> int:
        return self.lift_table[self.Gab.to_canonical(x)]

    def f(self, m: int, x: Sequence[int]) -> list[int]:
        """``f_m x`` in ``L_2(G_ab)`` coordinates."""
        return self.f_choice(m, x)

    def commutator_coords(self, g: int) -> list[int]:
        return list(self.gp_coords[g])


def class2_data(G: FiniteGroup, rng: random.Random | None = None) -> Class2Data:
    """Build ``c_2`` and the choices ``x -> x~`` and ``(m, x) -> f_m x``.

    Without ``rng`` the lift is the minimal index in each coset and ``f_m x``
    is the normal form of the HNF solution. With ``rng`` both choices are
    randomised; results that depend on them only through well-defined maps
    must not change.
    """
    if len(G.lower_central_series) > 3:
        raise NilpotencyError("group has nilpotency class > 2")
    Gab, ab = G.abelianization()
    if not Gab.is_finite:
        raise GroupError("G_ab must be finite")
    Gp_sub = G.derived_subgroup
    Gprime, gp_coords, _ = abelian_subgroup(G, Gp_sub)
    L2 = lie_component(Gab, 2)
    rows = []
    for (i, j) in L2.basis.words:
        c = G.comm(G.generators[i], G.generators[j])
        rows.append(gp_coords[c])
    c2 = AbHom(L2.group, Gprime, rows)
    dec = hom_decompose(c2)
    if not dec.cokernel.is_trivial:
        raise AssertionError("c_2 is not surjective")

    cosets: dict = {}
    order = list(range(G.order))
    if rng is not None:
        rng.shuffle(order)
    for g in order:
        key = Gab.to_canonical(ab[g])
        if key not in cosets:
            cosets[key] = g
    kernel_gens = [list(r) for r in dec.kernel_inclusion.matrix]

    cache: dict = {}

    def f_choice(m: int, x: Sequence[int]) -> list[int]:
        key = (m, Gab.to_canonical(x))
        if key in cache:
            return cache[key]
        if not Gab.is_zero([m * v for v in x]):
            raise ValueError("f_m x needs m x = 0")
        t = G.power(cosets[key[1]], m)
        if t not in Gp_sub:
            raise AssertionError("lift power does not lie in G'")
        sol = preimage_coordinates(c2, gp_coords[t])
        if sol is None:
            raise AssertionError("c_2 is not surjective")
        if rng is not None:
            for k in kernel_gens:
                c = rng.randrange(-2, 3)
                sol = [a + c * b for a, b in zip(sol, k)]
        else:
            sol = L2.group.normal_form(sol)
        cache[key] = sol
        return sol

    return Class2Data(G, Gab, ab, Gprime, gp_coords, L2, c2, dec.kernel, dec.kernel_inclusion,
                      cosets, f_choice)


# ---------------------------------------------------------------------------


def _l2_poly(D: Class2Data, v: Sequence[int]) -> Poly:
    out: Poly = {}
    for c, w in zip(v, D.L2.basis.words):
        if c:
            for word, a in bracket_expansion(w).items():
                nv = out.get(word, 0) + c * a
                if nv:
                    out[word] = nv
                else:
                    out.pop(word, None)
    return out


def _add(*polys_with_coef) -> Poly:
    out: Poly = {}
    for c, p in polys_with_coef:
        for w, a in p.items():
            nv = out.get(w, 0) + c * a
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
    return out


@dataclass
class DeltaMaps:
    data: Class2Data
    domain: ExtTorSquareModel
    L3: object
    L3_mod: FPAbGroup               # L_3 / ([G_ab, Ker c_2] + V)
    Q1: FPAbGroup                   # L_3 / ([G_ab, Ker c_2] + V + Im delta)
    delta: AbHom                    # Tor(G_ab, G_ab) -> L3_mod
    delta1: AbHom
    delta2: AbHom
    delta3: AbHom
    beta: AbHom                     # G_ab (x) G' -> Q1
    T2: object
    S3: object
    probes: dict = field(default_factory=dict)
    descends: dict = field(default_factory=dict)

    # symbol formulas, used for generators and for randomised probes

    def delta_symbol(self, x1, m, x2) -> list[int]:
        D = self.data
        p = _add((1, commutator(linear(x1), _l2_poly(D, D.f(m, x2)))),
                 (1, commutator(linear(x2), _l2_poly(D, D.f(m, x1)))),
                 (comb(m, 2), commutator(linear([a + b for a, b in zip(x1, x2)]),
                                         commutator(linear(x1), linear(x2)))))
        return self.L3.from_poly(p) if p else [0] * self.L3.group.ngens

    def delta1_symbol(self, x1, m, x2) -> list[int]:
        D = self.data
        p = commutator(linear(x2), _l2_poly(D, D.f(m, x1)))
        return self.L3.from_poly(p) if p else [0] * self.L3.group.ngens

    def delta2_symbol(self, x1, m, x2) -> list[int]:
        D = self.data
        G = D.G
        a = D.gp_coords[G.power(D.lift(x2), m)]
        b = D.gp_coords[G.power(D.lift(x1), m)]
        u = self.T2.pure(x1, a)
        v = self.T2.pure(x2, b)
        return [s - t for s, t in zip(u, v)]

    def delta3_symbol(self, x1, m, x2) -> list[int]:
        u = self.S3.monomial(x1, x1, x2)
        v = self.S3.monomial(x1, x2, x2)
        c = comb(m, 2)
        return [c * (s - t) for s, t in zip(u, v)]


def _v_generators(D: Class2Data, L3) -> list[list[int]]:
    out = []
    A = D.Gab
    for x in A.torsion_elements():
        o = A.element_order(x)
        if o > 1:
            p = commutator(linear(x), _l2_poly(D, D.f(o, x)))
            if p:
                out.append(L3.from_poly(p))
    return out


def delta_maps(D: Class2Data, probes: int = 50, seed: int = 0) -> DeltaMaps:
    """The maps of the fourth-dimension analysis, with well-definedness checks."""
    A = D.Gab
    if not A.is_finite:
        raise GroupError("G_ab must be finite")
    W = ExtTorSquareModel(A)
    Tor = W.tor
    L3 = lie_component(A, 3)
    r = A.ngens
    bracket_K = []
    for k in D.ker_c2_inclusion.matrix:
        kp = _l2_poly(D, k)
        for y in range(r):
            p = commutator(linear(A.gen(y)), kp)
            if p:
                bracket_K.append(L3.from_poly(p))
    V = _v_generators(D, L3)
    L3_mod = L3.group.quotient(bracket_K + V)
    T2 = tensor(A, D.Gprime)
    S3 = sp(A, 3)

    maps = DeltaMaps(D, W, L3, L3_mod, L3_mod, None, None, None, None, None, T2, S3)  # type: ignore[arg-type]
    symbols = [Tor.generator_symbol(n) for n in range(Tor.group.ngens)]
    maps.delta = AbHom(Tor.group, L3_mod, [maps.delta_symbol(a, m, c) for a, m, c in symbols])
    img_delta = [list(row) for row in maps.delta.matrix]
    Q1 = L3_mod.quotient(img_delta)
    maps.Q1 = Q1
    # Tor-level maps on the canonical generators; whether they descend to
    # A ^* A (vanish on every tau_{o(x)}(x, x)) is recorded, not assumed
    maps.delta1 = AbHom(Tor.group, Q1, [maps.delta1_symbol(a, m, c) for a, m, c in symbols])
    maps.delta2 = AbHom(Tor.group, T2.group, [maps.delta2_symbol(a, m, c) for a, m, c in symbols])
    maps.delta3 = AbHom(Tor.group, S3.group, [maps.delta3_symbol(a, m, c) for a, m, c in symbols])
    diag = [list(r) for r in W.group.rel.basis]
    maps.descends = {
        name: all(f.codomain.is_zero(f(d)) for d in diag)
        for name, f in (("delta1", maps.delta1), ("delta2", maps.delta2), ("delta3", maps.delta3))
    }
    beta_rows = []
    for i in range(r):
        for j in range(D.Gprime.ngens):
            f = preimage_coordinates(D.c2, D.Gprime.gen(j))
            p = commutator(linear(A.gen(i)), _l2_poly(D, f))
            beta_rows.append(L3.from_poly(p) if p else [0] * L3.group.ngens)
    maps.beta = AbHom(T2.group, Q1, beta_rows)  # rows follow the i * |G'| + j layout of T2
    maps.probes = _probe(maps, probes, seed)
    return maps


def _probe(maps: DeltaMaps, n: int, seed: int) -> dict[str, int]:
    """Compare symbol formulas with the maps on random ``tau_m(x1, x2)``.

    The maps are defined on the canonical generators of Tor. The formulas for
    ``delta_1`` and ``delta_2`` pick up a defect of ``binom(m, 2)`` times a
    commutator term when a symbol is split additively, so for those two the
    disagreements are only counted. ``delta_3`` must agree everywhere.
    """
    A = maps.data.Gab
    counts = {"probes": 0, "delta": 0, "delta1": 0, "delta2": 0, "delta3": 0}
    if A.is_trivial or maps.domain.tor.group.ngens == 0:
        return counts
    rng = random.Random(seed)
    tor = maps.domain.tor
    checks = [
        ("delta", maps.delta, maps.L3_mod, maps.delta_symbol),
        ("delta1", maps.delta1, maps.Q1, maps.delta1_symbol),
        ("delta2", maps.delta2, maps.delta2.codomain, maps.delta2_symbol),
        ("delta3", maps.delta3, maps.delta3.codomain, maps.delta3_symbol),
    ]
    for _ in range(n):
        x1 = A.random_element(rng)
        x2 = A.random_element(rng)
        m = lcm(A.element_order(x1), A.element_order(x2)) * rng.choice((1, 1, 2, 3))
        t = tor.tau(x1, m, x2)
        for name, f, target, formula in checks:
            if not target.equal(f(t), formula(x1, m, x2)):
                counts[name] += 1
        counts["probes"] += 1
    if counts["delta3"]:
        raise AssertionError("delta_3 symbol formula disagrees with the map")
    return counts


# ---------------------------------------------------------------------------


def kernel_intersection(maps: DeltaMaps) -> Lattice:
    k2 = hom_decompose(maps.delta2).kernel_lattice
    k3 = hom_decompose(maps.delta3).kernel_lattice
    return k2.intersect(k3)


def kerrho2_bound(D: Class2Data, maps: DeltaMaps | None = None) -> FPAbGroup:
    """``delta_1(Ker delta_2 ∩ Ker delta_3)`` as a subgroup of its target."""
    maps = maps or delta_maps(D)
    K = kernel_intersection(maps)
    images = [maps.delta1(list(b)) for b in K.basis]
    sub, _ = maps.Q1.subgroup(images) if images else maps.Q1.subgroup([maps.Q1.zero()])
    return sub


def expo2_identity(maps: DeltaMaps) -> bool:
    """``2 delta_1 = - beta delta_2``."""
    lhs = maps.delta1.scale(2)
    rhs = -(maps.beta.compose(maps.delta2))
    return lhs.equals(rhs)


# ---------------------------------------------------------------------------


def kerdel3_brute_force(A: FPAbGroup) -> tuple[Lattice, Lattice]:
    """Kernel of ``delta_3`` against the subgroup generated by ``tau_m(x1, 2 x2)``.

    Both are returned as lattices in generator coordinates of ``A ^* A``; the
    lemma says they are equal. ``delta_3`` depends on ``A`` alone.
    """
    W = ExtTorSquareModel(A)
    S3 = sp(A, 3)
    tor = W.tor

    def d3(x1, m, x2):
        u = S3.monomial(x1, x1, x2)
        v = S3.monomial(x1, x2, x2)
        return [comb(m, 2) * (s - t) for s, t in zip(u, v)]

    rows = [d3(*tor.generator_symbol(n)) for n in range(tor.group.ngens)]
    delta3 = AbHom(W.group, S3.group, rows)
    ker = hom_decompose(delta3).kernel_lattice
    e = A.exponent()
    elems = list(A.elements())
    gens = []
    seen = set()
    for x1 in elems:
        o1 = A.element_order(x1)
        for x2 in elems:
            o2 = A.element_order(x2)
            m0 = lcm(o1, o2 // 2 if o2 % 2 == 0 else o2)
            y = [2 * v for v in x2]
            for m in range(m0, 2 * e + 1, m0):
                t = tuple(W.group.normal_form(tor.tau(x1, m, y)))
                if t not in seen:
                    seen.add(t)
                    gens.append(list(t))
    rel = [list(r) for r in W.group.rel.basis]
    n = W.group.ngens
    claimed = Lattice.from_generators(gens + rel, n) if gens + rel else Lattice.zero(n)
    return ker, claimed


# ---------------------------------------------------------------------------


def d3rel_subgroup(E: FiniteGroup, N: Subgroup, check: bool = False) -> Subgroup:
    """``N' gamma_3(E) sgr{[a^k, b] : a^k, b^k in N E'}``."""
    if not E.is_normal(N):
        raise GroupError("subgroup is not normal")
    NE = N.join(E.derived_subgroup)
    T = E.table
    powers = np.arange(E.order)
    gens: set[int] = set()
    inv = E.inverses
    for _k in range(1, E.exponent + 1):
        ok = NE.mask[powers]
        a = np.unique(powers[ok])
        b = np.flatnonzero(ok)
        if len(a) and len(b):
            ab = T[np.ix_(a, b)]
            c = T[T[ab, inv[a][:, None]], inv[b][None, :]]
            gens.update(np.unique(c).tolist())
        powers = T[powers, np.arange(E.order)]
    base = relative_lower_bound(E, N, 3)
    S = E.closure(set(base.elements_list) | gens)
    if check:
        R = relative_dimension_subgroup(E, N, 3)
        if S != R:
            raise AssertionError("formula and group ring disagree on D_3(E, N)")
    return S


@dataclass
class D4Report:
    group: str
    quotient_order: int
    quotient_exponent: int
    bound_order: int
    divides: bool
    exponent_ok: bool

    @property
    def passed(self) -> bool:
        return self.divides and self.exponent_ok


def d4_check(E: FiniteGroup) -> D4Report:
    """``|D_4(E)/gamma_4(E)|`` against ``|delta_1(Ker delta_2 ∩ Ker delta_3)|`` for ``E/gamma_3(E)``."""
    if len(E.lower_central_series) > 4:
        raise NilpotencyError("group has nilpotency class > 3")
    from .groupring import subquotient
    D4 = dimension_subgroup(E, 4)
    _, qo, qe = subquotient(E, D4, E.gamma(4))
    G, _ = E.quotient(E.gamma(3))
    bound = kerrho2_bound(class2_data(G))
    bo = bound.order()
    return D4Report(E.name, qo, qe, bo, bo % qo == 0, 2 % qe == 0)


def shuffled_consistency(G: FiniteGroup, seed: int = 1) -> bool:
    """Re-run with randomised lifts and ``f`` choices; the maps must agree."""
    D0 = class2_data(G)
    D1 = class2_data(G, rng=random.Random(seed))
    m0 = delta_maps(D0)
    m1 = delta_maps(D1)
    same_target = m0.Q1.rel == m1.Q1.rel and m0.L3_mod.rel == m1.L3_mod.rel
    if not same_target:
        return False
    return (m0.delta1.equals(AbHom(m0.delta1.domain, m0.Q1, m1.delta1.matrix))
            and m0.delta2.equals(m1.delta2) and m0.delta3.equals(m1.delta3))


__all__ = [
    "Class2Data", "class2_data", "DeltaMaps", "delta_maps", "kerrho2_bound", "expo2_identity",
    "kerdel3_brute_force", "d3rel_subgroup", "d4_check", "D4Report", "shuffled_consistency",
    "kernel_intersection", "NilpotencyError",
]
