"""Quadratic functors Omega, R, the exterior torsion square and friends.

Each functor value is a small model object with a ``group`` and a list of
generator *symbols*. A symbol is an integer combination of atoms such as
``("tau", a, m, c)`` or ``("w", n, x)``; ``evaluate`` turns an atom into
coordinates. Functoriality is then generic: push each generator symbol
through ``f`` and evaluate it in the target (see :func:`functor_map`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Sequence

from .abelian import (
    AbelianGroupError,
    AbHom,
    FPAbGroup,
    GammaGroup,
    TorGroup,
    direct_sum,
    factor_through,
    hom_decompose,
    identity_hom,
    lambda2,
    sp,
    tensor,
)
from .linalg import hnf_auto

Symbol = list  # list of (coefficient, atom)


def _vadd(u, v, c=1):
    return [a + c * b for a, b in zip(u, v)]


def _push_atom(atom: tuple, f: AbHom) -> tuple:
    kind = atom[0]
    if kind == "tau":
        return ("tau", f(atom[1]), atom[2], f(atom[3]))
    if kind == "w":
        return ("w", atom[1], f(atom[2]))
    if kind in ("gamma", "gamma2"):
        return (kind, f(atom[1]))
    if kind in ("wedge", "sym", "tensor"):
        return (kind, f(atom[1]), f(atom[2]))
    raise ValueError(f"unknown atom {kind!r}")


class FunctorModel:
    """Base class: subclasses set ``base``, ``group`` and implement two hooks."""

    base: FPAbGroup
    group: FPAbGroup

    def generator_symbol(self, t: int) -> Symbol:
        raise NotImplementedError

    def evaluate(self, atom: tuple) -> list[int]:
        raise NotImplementedError

    def evaluate_symbol(self, sym: Symbol) -> list[int]:
        out = [0] * self.group.ngens
        for c, atom in sym:
            out = _vadd(out, self.evaluate(atom), c)
        return out


def functor_map(FA: FunctorModel, FB: FunctorModel, f: AbHom) -> AbHom:
    """``F(f) : F(A) -> F(B)``; well-definedness is checked by AbHom."""
    rows = []
    for t in range(FA.group.ngens):
        sym = [(c, _push_atom(a, f)) for c, a in FA.generator_symbol(t)]
        rows.append(FB.evaluate_symbol(sym))
    return AbHom(FA.group, FB.group, rows)


# ---------------------------------------------------------------------------
# concrete models


class TorSquareModel(FunctorModel):
    name = "tor"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.tor = TorGroup(A, A)
        self.group = self.tor.group

    def generator_symbol(self, t):
        a, m, c = self.tor.generator_symbol(t)
        return [(1, ("tau", a, m, c))]

    def evaluate(self, atom):
        if atom[0] != "tau":
            raise ValueError(atom[0])
        return self.tor.tau(atom[1], atom[2], atom[3])

    def tau(self, a, m, c):
        return self.tor.tau(a, m, c)


def omega_cyclic_value(d: int, n: int, x: int) -> int:
    """Coefficient of ``w_n(x u)`` on the generator ``w_d(u)`` of ``Omega(Z/d)``."""
    x %= d
    if x == 0:
        return 0
    dp = d // gcd(x, d)  # order of x u
    if n % dp:
        raise AbelianGroupError("w precondition violated: n*x != 0")
    t = x // (d // dp)
    return ((n // dp) * (d // dp) * t * t) % d


class OmegaModel(FunctorModel):
    """Structural ``Omega(A) = (+) Omega(C_i) (+) (+)_{i<j} Tor(C_i, C_j)``.

    Generators: ``w_{d_i}(u_i)`` per finite factor, then the cross generators
    ``E(tau_g((d_i/g) u_i, (d_j/g) u_j))`` for ``i < j``.
    """

    name = "omega"

    def __init__(self, A: FPAbGroup):
        self.base = A
        inv = A.invariants
        self.diag = [i for i, d in enumerate(inv) if d]
        self.cross = [(i, j) for i in range(len(inv)) for j in range(i + 1, len(inv))
                      if inv[i] and inv[j] and gcd(inv[i], inv[j]) > 1]
        orders = [inv[i] for i in self.diag] + [gcd(inv[i], inv[j]) for i, j in self.cross]
        rows = []
        for t, o in enumerate(orders):
            row = [0] * len(orders)
            row[t] = o
            rows.append(row)
        labels = [f"w{inv[i]}(u{i})" for i in self.diag] + [f"E(u{i},u{j})" for i, j in self.cross]
        self.group = FPAbGroup(labels, rows)
        self._diag_pos = {i: t for t, i in enumerate(self.diag)}
        self._cross_pos = {p: len(self.diag) + t for t, p in enumerate(self.cross)}

    def w(self, n: int, x: Sequence[int]) -> list[int]:
        A = self.base
        if n <= 0:
            raise AbelianGroupError("w needs n > 0")
        if not A.is_zero([n * v for v in x]):
            raise AbelianGroupError("w precondition violated: n*x != 0")
        y = A.to_canonical(x)
        inv = A.invariants
        out = [0] * self.group.ngens
        for i, t in self._diag_pos.items():
            out[t] = omega_cyclic_value(inv[i], n, y[i])
        for (i, j), t in self._cross_pos.items():
            if y[i] and y[j]:
                di, dj = inv[i], inv[j]
                g = gcd(di, dj)
                num = (n * y[i] // di) * y[j]
                out[t] = (num // (dj // g)) % g
        return out

    def generator_symbol(self, t):
        A = self.base
        inv = A.invariants
        if t < len(self.diag):
            i = self.diag[t]
            return [(1, ("w", inv[i], A.canonical_generator(i)))]
        i, j = self.cross[t - len(self.diag)]
        g = gcd(inv[i], inv[j])
        a = [(inv[i] // g) * v for v in A.canonical_generator(i)]
        c = [(inv[j] // g) * v for v in A.canonical_generator(j)]
        return [(1, ("w", g, _vadd(a, c))), (-1, ("w", g, a)), (-1, ("w", g, c))]

    def evaluate(self, atom):
        if atom[0] != "w":
            raise ValueError(atom[0])
        return self.w(atom[1], atom[2])


def omega_bruteforce(A: FPAbGroup) -> tuple[FPAbGroup, list[tuple[int, tuple[int, ...]]]]:
    """Omega(A) from the symbol presentation.

    Every symbol is rewritten to its minimal index, ``w_N(x) = (N/o(x)) w_{o(x)}(x)``,
    so generators are ``w_{o(x)}(x)`` for ``x`` in ``A``. The remaining three
    relation families are instantiated at the smallest admissible index with
    multipliers ``k`` up to ``2 exp(A)``. Keeping ``k`` inside the divisors of the
    exponent is not enough: for ``Z/3 + Z/3`` it leaves ``(Z/3)^5``.

    Returns the group and, per generator, ``(o(x), canonical x)``.
    """
    if not A.is_finite:
        raise AbelianGroupError("brute-force Omega needs a finite group")
    inv = A.invariants
    e = A.exponent()
    elems = list(A.torsion_canonical_elements())
    idx = {x: i for i, x in enumerate(elems)}

    def order(x):
        o = 1
        for a, d in zip(x, inv):
            od = d // gcd(a, d)
            o = o * od // gcd(o, od)
        return o

    orders = {x: order(x) for x in elems}

    def add(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, inv))

    def scal(k, x):
        return tuple((k * a) % d for a, d in zip(x, inv))

    N = len(elems)
    seen: set[tuple[int, ...]] = set()

    def row(*terms):
        r = [0] * N
        for c, n, x in terms:
            o = orders[x]
            if n % o:
                raise AssertionError("index does not kill the element")
            r[idx[x]] += c * (n // o)
        if any(r):
            seen.add(tuple(r))

    def lcm(*ns):
        out = 1
        for n in ns:
            out = out * n // gcd(out, n)
        return out

    for k in range(1, 2 * e + 1):
        for x in elems:
            kx = scal(k, x)
            n = orders[kx]
            # k w_{nk}(x) = w_n(kx)
            row((k, n * k, x), (-1, n, kx))
            for y in elems:
                n = lcm(orders[kx], orders[y])
                row((1, n, add(kx, y)), (-1, n, kx), (-1, n, y),
                    (-1, n * k, add(x, y)), (1, n * k, x), (1, n * k, y))
    for a, b, c in itertools.combinations_with_replacement(range(N), 3):
        x, y, z = elems[a], elems[b], elems[c]
        n = lcm(orders[x], orders[y], orders[z])
        row((1, n, add(add(x, y), z)), (-1, n, add(x, y)), (-1, n, add(x, z)),
            (-1, n, add(y, z)), (1, n, x), (1, n, y), (1, n, z))
    rows = [list(r) for r in sorted(seen)]
    symbols = [(orders[x], x) for x in elems]
    labels = [f"w{n}({','.join(map(str, x))})" for n, x in symbols]
    G = FPAbGroup(labels, relation_lattice=hnf_auto(rows, N)) if rows else FPAbGroup(labels)
    return G, symbols


def omega_comparison(A: FPAbGroup) -> AbHom:
    """Map brute-force Omega -> structural Omega, ``w_n(x) -> w_n(x)``."""
    G, symbols = omega_bruteforce(A)
    model = OmegaModel(A)
    rows = [model.w(n, A.from_canonical(x)) for n, x in symbols]
    return AbHom(G, model.group, rows)


class GammaModel(FunctorModel):
    name = "gamma"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.gam = GammaGroup(A)
        self.group = self.gam.group

    def generator_symbol(self, t):
        return [(c, ("gamma", x)) for c, x in self.gam.generator_symbol(t)]

    def evaluate(self, atom):
        return self.gam.gamma(atom[1])


class ExteriorModel(FunctorModel):
    name = "lambda2"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.ext = lambda2(A)
        self.group = self.ext.group
        self._pairs = list(self.ext.index)

    def generator_symbol(self, t):
        i, j = self._pairs[t]
        return [(1, ("wedge", self.base.gen(i), self.base.gen(j)))]

    def evaluate(self, atom):
        return self.ext.wedge(atom[1], atom[2])


class SymSquareModel(FunctorModel):
    name = "sp2"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.sym = sp(A, 2)
        self.group = self.sym.group
        self._monos = list(self.sym.index)

    def generator_symbol(self, t):
        i, j = self._monos[t]
        return [(1, ("sym", self.base.gen(i), self.base.gen(j)))]

    def evaluate(self, atom):
        return self.sym.monomial(atom[1], atom[2])


class TensorSquareModel(FunctorModel):
    name = "tensor2"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.t = tensor(A, A)
        self.group = self.t.group

    def generator_symbol(self, t):
        k = self.base.ngens
        return [(1, ("tensor", self.base.gen(t // k), self.base.gen(t % k)))]

    def evaluate(self, atom):
        return self.t.pure(atom[1], atom[2])


def two_torsion(A: FPAbGroup) -> tuple[FPAbGroup, AbHom, list[int]]:
    """``_2A`` as ``(Z/2)^k`` on the factors of even order, its inclusion and factor indices."""
    inv = A.invariants
    idx = [i for i, d in enumerate(inv) if d and d % 2 == 0]
    k = len(idx)
    T = FPAbGroup([f"h{i}" for i in idx], [[2 * (a == b) for b in range(k)] for a in range(k)])
    rows = [[(inv[i] // 2) * v for v in A.canonical_generator(i)] for i in idx]
    return T, AbHom(T, A, rows), idx


class RModel(FunctorModel):
    """``R(A)``: ``Tor(A,A) (+) Gamma(_2A)`` modulo the two relation families."""

    name = "r"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.tor = TorGroup(A, A)
        self.two, self.two_inc, self._two_idx = two_torsion(A)
        self.gam = GammaGroup(self.two)
        nt, ng = self.tor.group.ngens, self.gam.group.ngens
        rows = []
        for r in self.tor.group.rel.basis:
            rows.append(list(r) + [0] * ng)
        for r in self.gam.group.rel.basis:
            rows.append([0] * nt + list(r))
        for x in A.torsion_elements():
            o = A.element_order(x)
            if o > 1:
                rows.append(self.tor.tau(x, o, x) + [0] * ng)
        two = self.two
        for i in range(two.ngens):
            for j in range(two.ngens):
                s, t = two.gen(i), two.gen(j)
                lhs = self.gam.w(s, t)
                rhs = self.tor.tau(self.two_inc(s), 2, self.two_inc(t))
                rows.append([-v for v in rhs] + lhs)
        labels = list(self.tor.group.labels) + list(self.gam.group.labels)
        self.group = FPAbGroup(labels, rows)
        self._nt = nt

    def _to_two(self, s: Sequence[int]) -> list[int]:
        A = self.base
        y = A.to_canonical(s)
        out = []
        for pos, i in enumerate(self._two_idx):
            h = A.invariants[i] // 2
            if y[i] % h:
                raise AbelianGroupError("element is not 2-torsion")
            out.append(y[i] // h)
        for i, v in enumerate(y):
            if v and i not in self._two_idx:
                raise AbelianGroupError("element is not 2-torsion")
        return out

    def generator_symbol(self, t):
        if t < self._nt:
            a, m, c = self.tor.generator_symbol(t)
            return [(1, ("tau", a, m, c))]
        return [(c, ("gamma2", self.two_inc(x))) for c, x in self.gam.generator_symbol(t - self._nt)]

    def evaluate(self, atom):
        if atom[0] == "tau":
            return self.tor.tau(atom[1], atom[2], atom[3]) + [0] * self.gam.group.ngens
        if atom[0] == "gamma2":
            return [0] * self._nt + self.gam.gamma(self._to_two(atom[1]))
        raise ValueError(atom[0])


class ExtTorSquareModel(FunctorModel):
    """``A ^* A = Tor(A, A) / <tau_{o(x)}(x, x)>``."""

    name = "ext-tor"

    def __init__(self, A: FPAbGroup):
        self.base = A
        self.tor = TorGroup(A, A)
        diag = []
        for x in A.torsion_elements():
            o = A.element_order(x)
            if o > 1:
                diag.append(self.tor.tau(x, o, x))
        self.group = self.tor.group.quotient(diag)
        self.projection = AbHom(self.tor.group, self.group,
                                [self.tor.group.gen(i) for i in range(self.tor.group.ngens)])

    def generator_symbol(self, t):
        a, m, c = self.tor.generator_symbol(t)
        return [(1, ("tau", a, m, c))]

    def evaluate(self, atom):
        return self.tor.tau(atom[1], atom[2], atom[3])

    def tau(self, a, m, c):
        return self.tor.tau(a, m, c)


def omega(A: FPAbGroup) -> OmegaModel:
    return OmegaModel(A)


def r_functor(A: FPAbGroup) -> RModel:
    return RModel(A)


def ext_tor_square(A: FPAbGroup) -> ExtTorSquareModel:
    return ExtTorSquareModel(A)


def em_maps(A: FPAbGroup) -> tuple[AbHom, AbHom]:
    """``E : Tor(A,A) -> Omega(A)`` and ``T : Omega(A) -> Tor(A,A)``."""
    tor_m = TorSquareModel(A)
    om = OmegaModel(A)
    E_rows = []
    for t in range(tor_m.group.ngens):
        a, m, c = tor_m.tor.generator_symbol(t)
        E_rows.append(_vadd(_vadd(om.w(m, _vadd(a, c)), om.w(m, a), -1), om.w(m, c), -1))
    E = AbHom(tor_m.group, om.group, E_rows)
    T_rows = []
    for t in range(om.group.ngens):
        row = [0] * tor_m.group.ngens
        for coef, (_, n, x) in om.generator_symbol(t):
            row = _vadd(row, tor_m.tau(x, n, x), coef)
        T_rows.append(row)
    T = AbHom(om.group, tor_m.group, T_rows)
    return E, T


# ---------------------------------------------------------------------------
# cross effects


FUNCTORS: dict[str, Callable[[FPAbGroup], FunctorModel]] = {
    "gamma": GammaModel,
    "omega": OmegaModel,
    "r": RModel,
    "tor": TorSquareModel,
    "lambda2": ExteriorModel,
    "sp2": SymSquareModel,
    "tensor2": TensorSquareModel,
    "ext-tor": ExtTorSquareModel,
}

QUADRATIC_TAGS = ("gamma", "omega", "r", "tor", "lambda2", "sp2")


@dataclass
class QuadStructure:
    tag: str
    A: FPAbGroup
    F_of_A: FPAbGroup
    cross: FPAbGroup
    H: AbHom
    P: AbHom
    i12: AbHom
    checks: dict = field(default_factory=dict)


def quad_structure(tag: str, A: FPAbGroup) -> QuadStructure:
    """``F{A} = (F(A) -H-> F(A|A) -P-> F(A))`` with both defining identities verified."""
    if tag not in QUADRATIC_TAGS:
        raise ValueError(f"{tag!r} is not a quadratic functor tag; choose from {QUADRATIC_TAGS}")
    make = FUNCTORS[tag]
    k = A.ngens
    B = direct_sum(A, A)
    eye = [[int(i == j) for j in range(k)] for i in range(k)]
    zero = [[0] * k for _ in range(k)]
    i1 = AbHom(A, B, [r + z for r, z in zip(eye, zero)])
    i2 = AbHom(A, B, [z + r for r, z in zip(eye, zero)])
    p1 = AbHom(B, A, eye + zero)
    p2 = AbHom(B, A, zero + eye)
    diag = AbHom(A, B, [r + r for r in eye])
    fold = AbHom(B, A, eye + eye)
    FA, FB = make(A), make(B)
    Fi1, Fi2 = functor_map(FA, FB, i1), functor_map(FA, FB, i2)
    Fp1, Fp2 = functor_map(FB, FA, p1), functor_map(FB, FA, p2)
    Fdiag, Ffold = functor_map(FA, FB, diag), functor_map(FB, FA, fold)
    FA2 = direct_sum(FA.group, FA.group)
    both = AbHom(FB.group, FA2, [r + s for r, s in zip(Fp1.matrix, Fp2.matrix)])
    dec = hom_decompose(both)
    i12 = dec.kernel_inclusion
    cross = dec.kernel
    diff = Fdiag - Fi1 - Fi2
    H = factor_through(diff, i12)
    P = Ffold.compose(i12)
    checks = {}
    checks["i12 H = F(i1+i2) - F(i1) - F(i2)"] = i12.compose(H).equals(diff)
    checks["P = F(p1+p2) i12"] = P.equals(Ffold.compose(i12))
    # F(A + A) = F(A) + F(A) + F(A|A) via (F i1, F i2, i12)
    total = direct_sum(FA.group, FA.group, cross)
    assemble = AbHom(total, FB.group, Fi1.matrix + Fi2.matrix + i12.matrix)
    checks["F(A+A) = F(A) + F(A) + F(A|A)"] = assemble.is_isomorphism()
    two = AbHom(A, A, [[2 * v for v in r] for r in eye])
    checks["PH = F(2) - 2"] = P.compose(H).equals(functor_map(FA, FA, two) - identity_hom(FA.group).scale(2))
    if not all(checks.values()):
        bad = [k for k, v in checks.items() if not v]
        raise AssertionError(f"cross-effect identities failed for {tag}: {bad}")
    return QuadStructure(tag, A, FA.group, cross, H, P, i12, checks)


# ---------------------------------------------------------------------------
# graded square functors


class GradedAbGroup:
    """Finitely supported graded abelian group; missing degrees are zero."""

    def __init__(self, components: dict[int, FPAbGroup] | None = None):
        comps = {}
        for d, G in (components or {}).items():
            if d < 0:
                raise ValueError("degrees must be non-negative")
            if not G.is_trivial:
                comps[int(d)] = G
        self.components = dict(sorted(comps.items()))

    def __getitem__(self, d: int) -> FPAbGroup:
        return self.components.get(d, FPAbGroup([]))

    @property
    def top(self) -> int:
        return max(self.components, default=-1)

    def structure(self) -> dict[int, str]:
        return {d: G.structure() for d, G in self.components.items()}

    def __repr__(self) -> str:
        return f"GradedAbGroup({self.structure()})"


def z2_odd(top: int) -> GradedAbGroup:
    """``(Z_2)_odd`` materialized in degrees ``1, 3, ..., <= top``."""
    return GradedAbGroup({d: FPAbGroup(["t"], [[2]]) for d in range(1, top + 1, 2)})


def square_functor(A: GradedAbGroup, variant: str) -> GradedAbGroup:
    """``Sq^(x)`` (variant "tensor") or ``Sq^*`` (variant "torsion")."""
    if variant not in ("tensor", "torsion"):
        raise ValueError("variant must be 'tensor' or 'torsion'")
    top = A.top
    if top < 0:
        return GradedAbGroup()
    Z = z2_odd(top + 1)
    out: dict[int, list[FPAbGroup]] = {}
    for i, Ai in A.components.items():
        for j in range(0, i):
            Bj = direct_sum(A[j], Z[j])
            if variant == "tensor":
                piece = tensor(Ai, Bj).group
            else:
                piece = TorGroup(Ai, Bj).group
            out.setdefault(i + j, []).append(piece)
    for m, Am in A.components.items():
        if variant == "tensor":
            piece = GammaModel(Am).group if m % 2 else ExteriorModel(Am).group
        else:
            piece = RModel(Am).group if m % 2 else OmegaModel(Am).group
        out.setdefault(2 * m, []).append(piece)
    return GradedAbGroup({n: direct_sum(*ps) for n, ps in out.items()})


__all__ = [
    "FunctorModel", "functor_map", "TorSquareModel", "OmegaModel", "omega", "omega_bruteforce",
    "omega_comparison", "omega_cyclic_value", "GammaModel", "ExteriorModel", "SymSquareModel",
    "TensorSquareModel", "RModel", "r_functor", "ExtTorSquareModel", "ext_tor_square", "em_maps",
    "two_torsion", "QuadStructure", "quad_structure", "QUADRATIC_TAGS", "FUNCTORS",
    "GradedAbGroup", "square_functor", "z2_odd",
]
