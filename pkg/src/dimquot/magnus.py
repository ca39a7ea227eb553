"""Truncated free group rings via the Magnus expansion ``x_i -> 1 + X_i``.

``Z[F]/f^(d+1)`` is identified with the tensor algebra on ``X_1..X_r`` cut off
above degree ``d``; ideals become lattices in the coefficient space of words
of length ``1..d`` (ordered by length, then lexicographically).
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .abelian import AbHom, FPAbGroup, hom_decompose
from .liefun import (
    bracket_expansion,
    commutator,
    left_normed,
    letter,
    lyndon_coordinates,
    lyndon_words,
)
from .linalg import Lattice, hnf_auto

MAX_DEGREE = 5
MAX_FILTRATION_DEGREE = 4
MAX_RANK = 3


class MagnusError(ValueError):
    pass


class MagnusCapError(MagnusError):
    """Rank or degree beyond the supported truncation."""


# ---------------------------------------------------------------------------
# free words


@dataclass(frozen=True)
class FreeWord:
    """Reduced word in the free group on ``rank`` letters; letters are ``(index, ±1)``."""

    rank: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for i, e in self.letters:
            if not 0 <= i < self.rank or e not in (1, -1):
                raise MagnusError(f"bad letter {(i, e)} for rank {self.rank}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, rank: int, i: int) -> "FreeWord":
        return cls(rank, ((i, 1),))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.rank, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, tuple((i, -e) for i, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        out = FreeWord(self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{i + 1}" + ("" if e == 1 else "^-1") for i, e in self.letters)


def _reduce(letters) -> tuple:
    out: list = []
    for a in letters:
        if out and out[-1][0] == a[0] and out[-1][1] == -a[1]:
            out.pop()
        else:
            out.append(tuple(a))
    return tuple(out)


def comm(a: FreeWord, b: FreeWord) -> FreeWord:
    """``[a, b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


def left_normed_comm(*ws: FreeWord) -> FreeWord:
    out = ws[0]
    for w in ws[1:]:
        out = comm(out, w)
    return out


def random_word(rank: int, length: int, rng: random.Random) -> FreeWord:
    return FreeWord(rank, tuple((rng.randrange(rank), rng.choice((1, -1))) for _ in range(length)))


# relator mini-language: products of generators, brackets and powers, e.g.
# "[1,2]^2 [1,3]", "[[1,2],2]", "1^2", "(1 2)^-1"; relators separated by ';'

_TOKEN = re.compile(r"\s*(?:(\d+)|(\^)\s*(-?\d+)|([\[\](),;*]))")


def parse_relators(text: str, rank: int) -> list[FreeWord]:
    """Parse ``;``-separated relators over 1-based generator indices."""
    out = []
    for part in text.split(";"):
        if part.strip():
            out.append(parse_word(part, rank))
    return out


def parse_word(text: str, rank: int) -> FreeWord:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise MagnusError(f"expected {expected!r} in {text!r}")
        pos += 1
        return t

    def expr():
        w = FreeWord(rank)
        while True:
            t = peek()
            if t is None or t in ("]", ")", ","):
                return w
            if t == "*":
                take()
                continue
            w = w * term()

    def term():
        t = peek()
        if isinstance(t, int):
            take()
            if not 1 <= t <= rank:
                raise MagnusError(f"generator {t} outside 1..{rank}")
            w = FreeWord.gen(rank, t - 1)
        elif t == "[":
            take()
            parts = [expr()]
            while peek() == ",":
                take()
                parts.append(expr())
            take("]")
            if len(parts) < 2:
                raise MagnusError("a bracket needs at least two entries")
            w = left_normed_comm(*parts)
        elif t == "(":
            take()
            w = expr()
            take(")")
        else:
            raise MagnusError(f"unexpected token {t!r} in {text!r}")
        while isinstance(peek(), tuple):
            w = w ** take()[1]
        return w

    w = expr()
    if pos != len(tokens):
        raise MagnusError(f"trailing input in {text!r}")
    return w


def _tokenize(text: str) -> list:
    tokens: list = []
    i = 0
    text = text.strip()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise MagnusError(f"cannot parse {text[i:]!r}")
        if m.group(1):
            tokens.append(int(m.group(1)))
        elif m.group(2):
            tokens.append(("^", int(m.group(3))))
        else:
            tokens.append(m.group(4))
        i = m.end()
    return tokens


# ---------------------------------------------------------------------------
# truncated tensor algebra


@dataclass(frozen=True)
class TruncatedTensor:
    rank: int
    degree: int
    coeffs: dict = field(default_factory=dict)  # word tuple -> int, words of length <= degree

    def __post_init__(self):
        if any(len(w) > self.degree for w in self.coeffs):
            raise MagnusError("coefficient above the degree cap")

    @classmethod
    def one(cls, rank: int, degree: int) -> "TruncatedTensor":
        return cls(rank, degree, {(): 1})

    @classmethod
    def zero(cls, rank: int, degree: int) -> "TruncatedTensor":
        return cls(rank, degree, {})

    @classmethod
    def monomial(cls, rank: int, degree: int, word: Sequence[int], c: int = 1) -> "TruncatedTensor":
        w = tuple(word)
        return cls(rank, degree, {w: c} if len(w) <= degree and c else {})

    @classmethod
    def from_poly(cls, rank: int, degree: int, p: dict) -> "TruncatedTensor":
        return cls(rank, degree, {w: c for w, c in p.items() if c and len(w) <= degree})

    def _combine(self, other: "TruncatedTensor", sign: int) -> "TruncatedTensor":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            v = out.get(w, 0) + sign * c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return TruncatedTensor(self.rank, self.degree, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "TruncatedTensor":
        return TruncatedTensor(self.rank, self.degree, {w: c * v for w, v in self.coeffs.items() if c * v})

    def __mul__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        d = self.degree
        out: dict = {}
        for u, a in self.coeffs.items():
            room = d - len(u)
            for v, b in other.coeffs.items():
                if len(v) <= room:
                    w = u + v
                    nv = out.get(w, 0) + a * b
                    if nv:
                        out[w] = nv
                    else:
                        out.pop(w)
        return TruncatedTensor(self.rank, d, out)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedTensor) and self.rank == other.rank
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.rank, self.degree, tuple(sorted(self.coeffs.items()))))

    def part(self, k: int) -> dict:
        return {w: c for w, c in self.coeffs.items() if len(w) == k}

    def min_degree(self) -> int | None:
        return min((len(w) for w in self.coeffs), default=None)

    def augmentation_part(self) -> "TruncatedTensor":
        """Drop the constant term."""
        return TruncatedTensor(self.rank, self.degree, {w: c for w, c in self.coeffs.items() if w})

    def vector(self) -> list[int]:
        """Coefficients on words of length ``1..degree``; the constant term is dropped."""
        idx = word_index(self.rank, self.degree)
        out = [0] * len(idx)
        for w, c in self.coeffs.items():
            if w:
                out[idx[w]] = c
        return out

    @classmethod
    def from_vector(cls, rank: int, degree: int, v: Sequence[int]) -> "TruncatedTensor":
        words = word_list(rank, degree)
        return cls(rank, degree, {w: c for w, c in zip(words, v) if c})


@lru_cache(maxsize=None)
def word_list(rank: int, degree: int) -> tuple[tuple[int, ...], ...]:
    return tuple(w for k in range(1, degree + 1) for w in itertools.product(range(rank), repeat=k))


@lru_cache(maxsize=None)
def word_index(rank: int, degree: int) -> dict:
    return {w: i for i, w in enumerate(word_list(rank, degree))}


def _letter_factor(rank: int, d: int, i: int, e: int) -> TruncatedTensor:
    if e == 1:
        return TruncatedTensor(rank, d, {(): 1, (i,): 1} if d >= 1 else {(): 1})
    # (1 + X)^-1 = 1 - X + X^2 - ...
    return TruncatedTensor(rank, d, {(i,) * k: (-1) ** k for k in range(d + 1)})


def magnus_expand(w: FreeWord, d: int) -> TruncatedTensor:
    if d > MAX_DEGREE:
        raise MagnusCapError(f"degree cap {d} above {MAX_DEGREE}")
    out = TruncatedTensor.one(w.rank, d)
    for i, e in w.letters:
        out = out * _letter_factor(w.rank, d, i, e)
    return out


def aug(w: FreeWord, d: int) -> TruncatedTensor:
    """``expand(w) - 1``."""
    return magnus_expand(w, d) - TruncatedTensor.one(w.rank, d)


# ---------------------------------------------------------------------------
# filtrations


def _lattice(rows: list[list[int]], n: int) -> Lattice:
    rows = [r for r in rows if any(r)]
    return hnf_auto(rows, n) if rows else Lattice.zero(n)


def power_lattice(rank: int, d: int, k: int) -> Lattice:
    """``f^k`` mod ``f^(d+1)``: span of words of length ``>= k``."""
    idx = word_index(rank, d)
    n = len(idx)
    rows = []
    for w, i in idx.items():
        if len(w) >= k:
            r = [0] * n
            r[i] = 1
            rows.append(r)
    return Lattice.from_generators(rows, n) if rows else Lattice.zero(n)


def _words_upto(rank: int, k: int) -> list[tuple]:
    return [()] + [w for j in range(1, k + 1) for w in itertools.product(range(rank), repeat=j)]


def relator_ideal(relators: Sequence[FreeWord], rank: int, d: int) -> Lattice:
    """``r(0) = (R - 1) Z[F]`` mod ``f^(d+1)``: two-sided span of ``X_u (rho - 1) X_v``."""
    n = len(word_index(rank, d))
    rows = []
    for rho in relators:
        a = aug(rho, d)
        low = a.min_degree()
        if low is None:
            continue
        for u in _words_upto(rank, d - low):
            left = TruncatedTensor.monomial(rank, d, u)
            lu = left * a
            for v in _words_upto(rank, d - low - len(u)):
                rows.append((lu * TruncatedTensor.monomial(rank, d, v)).vector())
    return _lattice(rows, n)


def _times_letters(L: Lattice, rank: int, d: int) -> list[list[int]]:
    rows = []
    for b in L.basis:
        t = TruncatedTensor.from_vector(rank, d, b)
        for i in range(rank):
            x = TruncatedTensor.monomial(rank, d, (i,))
            rows.append((x * t).vector())
            rows.append((t * x).vector())
    return rows


@dataclass
class Filtrations:
    rank: int
    degree: int
    f: list[Lattice]     # f[k] = f^k for k = 0..degree (f[0] is everything)
    r: list[Lattice]     # r[k] for k = 0..degree-1


def filtration_lattices(relators: Sequence[FreeWord], rank: int, d: int) -> Filtrations:
    if d > MAX_FILTRATION_DEGREE:
        raise MagnusCapError(f"degree {d} above cap {MAX_FILTRATION_DEGREE}")
    if rank > MAX_RANK:
        raise MagnusCapError(f"rank {rank} above cap {MAX_RANK}")
    n = len(word_index(rank, d))
    fs = [Lattice.full(n)] + [power_lattice(rank, d, k) for k in range(1, d + 1)]
    rs = [relator_ideal(relators, rank, d)]
    for _ in range(1, d):
        rs.append(_lattice(_times_letters(rs[-1], rank, d), n))
    for k in range(1, len(rs)):
        if not rs[k - 1].contains_lattice(rs[k]):
            raise AssertionError("r(k+1) is not contained in r(k)")
    return Filtrations(rank, d, fs, rs)


# ---------------------------------------------------------------------------
# Sjogren containment


@dataclass
class SjogrenReport:
    n: int
    samples: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def sample_relative_element(relators: Sequence[FreeWord], rank: int, n: int, rng: random.Random,
                            factors: int = 3) -> FreeWord:
    """Random element of ``R(n-1) gamma_{n+1}(F)``.

    Factors are ``[rho^h, g_1, ..., g_{n-1}]^{±1}`` for conjugates of relators and
    left-normed commutators of ``n + 1`` random words.
    """
    w = FreeWord(rank)
    for _ in range(factors):
        if relators and rng.random() < 0.6:
            rho = rng.choice(relators) ** rng.choice((1, -1))
            h = random_word(rank, rng.randrange(0, 3), rng)
            f = h * rho * h.inverse()
            gs = [random_word(rank, rng.randrange(1, 3), rng) for _ in range(n - 1)]
            f = left_normed_comm(f, *gs) if gs else f
        else:
            f = left_normed_comm(*[random_word(rank, rng.randrange(1, 3), rng) for _ in range(n + 1)])
        w = w * (f if rng.random() < 0.5 else f.inverse())
    return w


def sjogren_inclusion_check(relators: Sequence[FreeWord], rank: int, n: int, d: int | None = None,
                            samples: int = 40, seed: int = 0,
                            filtrations: Filtrations | None = None) -> SjogrenReport:
    """Containment ``R(n-1) gamma_{n+1}(F) ⊆ F ∩ (1 + r(n-1) + f^(n+1))`` on samples."""
    if not 1 <= n <= 3:
        raise MagnusError("n must be 1, 2 or 3")
    d = n + 1 if d is None else d
    fl = filtrations or filtration_lattices(relators, rank, d)
    target = fl.r[n - 1] + fl.f[n + 1]
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        w = sample_relative_element(relators, rank, n, rng)
        if not target.contains(aug(w, d).vector()):
            failures += 1
    return SjogrenReport(n, samples, failures)


# ---------------------------------------------------------------------------
# the lemma on (F' - 1) f


@lru_cache(maxsize=None)
def idlemma_lattice(rank: int) -> Lattice:
    """Degree 3 part of ``(F' - 1) f``: span of ``(X_i X_j - X_j X_i) X_k``."""
    rows = []
    for i in range(rank):
        for j in range(rank):
            for k in range(rank):
                p = commutator(letter(i), letter(j))
                t = TruncatedTensor.from_poly(rank, 3, p) * TruncatedTensor.monomial(rank, 3, (k,))
                rows.append(_degree_vector(t, 3))
    return _lattice(rows, rank ** 3)


def _degree_vector(t: TruncatedTensor, k: int) -> list[int]:
    words = list(itertools.product(range(t.rank), repeat=k))
    idx = {w: i for i, w in enumerate(words)}
    out = [0] * len(words)
    for w, c in t.coeffs.items():
        if len(w) == k:
            out[idx[w]] = c
    return out


def idlemma_check(u: TruncatedTensor, c: int) -> bool:
    """Is ``u ≡ c v_1`` mod ``f^4`` for some ``v_1`` in ``(F' - 1) f``?"""
    if c <= 0:
        raise MagnusError("c must be positive")
    if any(0 < len(w) < 3 for w in u.coeffs) or u.coeffs.get((), 0):
        raise MagnusError("u must be supported in degree >= 3")
    L = idlemma_lattice(u.rank)
    return L.scaled(c).contains(_degree_vector(u, 3))


# ---------------------------------------------------------------------------
# the [R ∩ F', F] gamma_4 identity


@dataclass
class MsqReport:
    rank: int
    relators: list[str]
    lhs: Lattice
    rhs: Lattice
    lhs_in_rhs: bool
    rhs_in_lhs: bool
    sanity_failures: int = 0

    @property
    def equal(self) -> bool:
        return self.lhs_in_rhs and self.rhs_in_lhs

    @property
    def passed(self) -> bool:
        return self.equal and self.sanity_failures == 0


def _l3_matrix(rank: int) -> list[list[int]]:
    words = list(itertools.product(range(rank), repeat=3))
    idx = {w: i for i, w in enumerate(words)}
    rows = []
    for w in lyndon_words(rank, 3):
        r = [0] * len(words)
        for word, c in bracket_expansion(w).items():
            r[idx[word]] += c
        rows.append(r)
    return rows


def msq_equality(relators: Sequence[FreeWord], rank: int, sanity_samples: int = 10,
                 seed: int = 0) -> MsqReport:
    """Both sides of the identity as lattices in ``L_3(Z^r)`` (Lyndon coordinates).

    LHS: Lie elements whose tensor image lies in the degree 3 part of
    ``f(R - 1) + (R - 1)f + r(2) + f^4``. RHS: span of ``[rho_i, x_j]`` mod ``gamma_4``.
    """
    if rank > MAX_RANK:
        raise MagnusCapError(f"rank {rank} above cap {MAX_RANK}")
    d = 3
    n3 = rank ** 3
    lead = []
    for rho in relators:
        a = aug(rho, d)
        if a.min_degree() is not None and a.min_degree() < 2:
            raise MagnusError(f"relator {rho} is not in F'")
        lead.append(TruncatedTensor.from_poly(rank, d, a.part(2)))
    rows = []
    for a2 in lead:
        for k in range(rank):
            x = TruncatedTensor.monomial(rank, d, (k,))
            rows.append(_degree_vector(a2 * x, 3))
            rows.append(_degree_vector(x * a2, 3))
    fl = filtration_lattices(relators, rank, d)
    for b in fl.r[2].basis:
        t = TruncatedTensor.from_vector(rank, d, b)
        if any(len(w) < 3 for w in t.coeffs):
            raise AssertionError("r(2) has components below degree 3")
        rows.append(_degree_vector(t, 3))
    M3 = _lattice(rows, n3)
    nl = len(lyndon_words(rank, 3))
    free_l3 = FPAbGroup([str(i) for i in range(nl)])
    T3 = FPAbGroup([str(i) for i in range(n3)], relation_lattice=M3)
    lhs = hom_decompose(AbHom(free_l3, T3, _l3_matrix(rank))).kernel_lattice

    rhs_rows = []
    for rho in relators:
        p2 = aug(rho, 2).part(2)
        for j in range(rank):
            rhs_rows.append(lyndon_coordinates(commutator(p2, letter(j)), rank, 3))
    rhs = _lattice(rhs_rows, nl)

    failures = _msq_sanity(relators, rank, M3, rhs, sanity_samples, seed)
    return MsqReport(rank, [str(r) for r in relators], lhs, rhs, rhs.contains_lattice(lhs),
                     lhs.contains_lattice(rhs), failures)


def _msq_sanity(relators, rank, M3: Lattice, rhs: Lattice, samples: int, seed: int) -> int:
    """Randomised checks of the two finite-generation shortcuts."""
    if not relators:
        return 0
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        # an element of R: product of conjugates of relators
        w = FreeWord(rank)
        for _ in range(2):
            h = random_word(rank, rng.randrange(0, 3), rng)
            w = w * h * (rng.choice(relators) ** rng.choice((1, -1))) * h.inverse()
        x = random_word(rank, rng.randrange(1, 3), rng)
        # (w - 1) u lies in M mod f^4 for u in f
        u = aug(x, 3)
        if not M3.contains(_degree_vector(aug(w, 3) * u, 3)):
            failures += 1
        # [w, x] mod gamma_4 lies in the span of [rho_i, x_j]
        c = aug(comm(w, x), 3)
        if any(len(k) < 3 for k in c.coeffs):
            failures += 1
            continue
        if not rhs.contains(lyndon_coordinates(c.part(3), rank, 3)):
            failures += 1
    return failures


def random_commutator_relators(rank: int, rng: random.Random, count: int | None = None) -> list[FreeWord]:
    """Random relators inside ``F'``: powers and products of basic commutators."""
    count = count or rng.randrange(1, 3)
    out = []
    for _ in range(count):
        w = FreeWord(rank)
        for _ in range(rng.randrange(1, 3)):
            i, j = rng.sample(range(rank), 2)
            c = comm(FreeWord.gen(rank, i), FreeWord.gen(rank, j)) ** rng.choice((1, 2, 3, -1, -2))
            if rng.random() < 0.3:
                k = rng.randrange(rank)
                c = comm(c, FreeWord.gen(rank, k))
            w = w * c
        if len(w):
            out.append(w)
    return out


def lie_degree_check(w_letters: Sequence[int], rank: int, d: int) -> bool:
    """For a left-normed commutator of letters: ``expand - 1`` starts in degree ``k`` with Lie leading part."""
    k = len(w_letters)
    w = left_normed_comm(*[FreeWord.gen(rank, i) for i in w_letters])
    a = aug(w, d)
    if any(0 < len(x) < k for x in a.coeffs):
        return False
    lead = left_normed(*[letter(i) for i in w_letters])
    return a.part(k) == {x: c for x, c in lead.items() if c}


__all__ = [
    "FreeWord", "MagnusError", "MagnusCapError", "comm", "left_normed_comm", "random_word", "parse_relators", "parse_word",
    "TruncatedTensor", "magnus_expand", "aug", "word_index", "word_list", "power_lattice",
    "relator_ideal", "filtration_lattices", "Filtrations", "sjogren_inclusion_check",
    "SjogrenReport", "sample_relative_element", "idlemma_check", "idlemma_lattice",
    "msq_equality", "MsqReport", "random_commutator_relators", "lie_degree_check", "MagnusError",
]
