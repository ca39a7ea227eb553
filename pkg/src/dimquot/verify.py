"""Verification suites over the built-in corpus and their JSON reports."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterator

from . import __version__
from .abelian import FPAbGroup, abelian_from_invariants, all_abelian_invariants, cyclic, parse_abelian
from .corpus import Manifest, corpus_groups, corpus_pairs, load_manifest
from .groupring import (
    dimension_subgroup,
    relative_dimension_subgroup,
    relative_lower_bound,
    subquotient,
)
from .groups import build_family
from .liefun import pbw_check
from .magnus import (
    TruncatedTensor,
    idlemma_lattice,
    lie_degree_check,
    msq_equality,
    parse_relators,
    random_commutator_relators,
    sjogren_inclusion_check,
)
from .nil2 import (
    class2_data,
    d3rel_subgroup,
    d4_check,
    delta_maps,
    expo2_identity,
    kerdel3_brute_force,
    kerrho2_bound,
    shuffled_consistency,
)
from .quadfun import em_maps, ext_tor_square, omega, omega_comparison, quad_structure, r_functor

SCHEMA = "dimquot.verify/1"


@dataclass
class CheckRecord:
    check: str
    claim: str
    inputs: dict
    expected: str
    computed: str
    passed: bool | None          # None means not applicable (reason in ``computed``)
    seconds: float = 0.0

    def as_dict(self, timings: bool) -> dict:
        d = {
            "check": self.check,
            "claim": self.claim,
            "inputs": self.inputs,
            "expected": self.expected,
            "computed": self.computed,
            "status": "skip" if self.passed is None else ("pass" if self.passed else "fail"),
        }
        if timings:
            d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class VerificationReport:
    suites: list[str]
    seed: int
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.records if r.passed is False)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> dict:
        by: dict[str, dict[str, int]] = {}
        for r in self.records:
            s = by.setdefault(r.check.split("/")[0], {"pass": 0, "fail": 0, "skip": 0})
            s["skip" if r.passed is None else ("pass" if r.passed else "fail")] += 1
        return {
            "total": len(self.records),
            "passed": sum(1 for r in self.records if r.passed),
            "failed": self.failed,
            "skipped": sum(1 for r in self.records if r.passed is None),
            "suites": by,
        }

    def as_dict(self, timings: bool = False) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "suites": self.suites,
            "seed": self.seed,
            "summary": self.summary(),
            "checks": [r.as_dict(timings) for r in self.records],
        }


def _timed(fn: Callable[[], CheckRecord]) -> CheckRecord:
    t = time.perf_counter()
    rec = fn()
    rec.seconds = time.perf_counter() - t
    return rec


# ---------------------------------------------------------------------------
# suites; each yields CheckRecords


def suite_d2d3(ctx: "Context") -> Iterator[CheckRecord]:
    for fam in corpus_groups(ctx.manifest):
        G = fam.group
        for n in (1, 2, 3):
            def run(G=G, n=n, spec=fam.spec):
                D = dimension_subgroup(G, n)
                g = G.gamma(n)
                return CheckRecord(f"d2d3/{spec}/n={n}", "D_n(G) = gamma_n(G) for n <= 3",
                                   {"group": spec, "n": n}, f"|gamma_n| = {g.order}",
                                   f"|D_n| = {D.order}", D == g)
            yield _timed(run)


def suite_cex(ctx: "Context") -> Iterator[CheckRecord]:
    fam = build_family("cex:2,1,1")
    E, N = fam.group, fam.subgroup
    x, y = E.generators
    z = E.power(E.comm(x, y), 2)
    D = relative_dimension_subgroup(E, N, 3)
    low = relative_lower_bound(E, N, 3)
    inputs = {"group": "cex:2,1,1"}
    yield CheckRecord("cex/orders", "|E| = p^{3(s+1)}", inputs, "64", str(E.order), E.order == 64)
    yield CheckRecord("cex/lower", "N' gamma_3(E) = 1", inputs, "1", str(low.order), low.order == 1)
    yield CheckRecord("cex/z-nontrivial", "z = [x,y]^{p^s} != 1", inputs, "z != 1", E.labels[z],
                      z != E.identity)
    yield CheckRecord("cex/z-in-D3", "z in D_3(E, N)", inputs, "true", str(z in D), z in D)
    k, w = 1, z
    while w not in low:
        w = E.mul(w, z)
        k += 1
    yield CheckRecord("cex/z-order", "z has order p modulo N' gamma_3(E)", inputs, "2", str(k), k == 2)
    G, _ = E.quotient(N)
    Gab, _ = G.abelianization()
    ets = ext_tor_square(Gab).group.order()
    q = D.order // low.order
    yield CheckRecord("cex/d3free-equality", "|D_3(E,N)/N' gamma_3(E)| = |G_ab ^* G_ab|", inputs,
                      str(ets), str(q), q == ets)


def suite_d3rel(ctx: "Context") -> Iterator[CheckRecord]:
    for spec, tag, fam, N in corpus_pairs(ctx.manifest):
        E = fam.group

        def run(E=E, N=N, spec=spec, tag=tag):
            a = d3rel_subgroup(E, N)
            b = relative_dimension_subgroup(E, N, 3)
            return CheckRecord(f"d3rel/{spec}/N={tag}",
                               "D_3(E,N) = N' gamma_3(E) sgr{[a^k, b] : a^k, b^k in N E'}",
                               {"group": spec, "N": tag}, f"|D_3(E,N)| = {b.order}",
                               f"|formula| = {a.order}", a == b)
        yield _timed(run)

        def seq(E=E, N=N, spec=spec, tag=tag):
            # |D_3(E,N)/N'g3| = |(D_3(E,N) ∩ N g3)/N'g3| * |D_3(G)/g3(G)|
            D = relative_dimension_subgroup(E, N, 3)
            low = relative_lower_bound(E, N, 3)
            mid = D.intersect(N.join(E.gamma(3)))
            G, _ = E.quotient(N)
            dg = dimension_subgroup(G, 3).order // G.gamma(3).order
            lhs = D.order // low.order
            rhs = (mid.order // low.order) * dg
            return CheckRecord(f"d3rel-seq/{spec}/N={tag}", "order identity of the relative sequence",
                               {"group": spec, "N": tag}, str(rhs), str(lhs), lhs == rhs)
        yield _timed(seq)


def suite_d3free(ctx: "Context") -> Iterator[CheckRecord]:
    for spec, tag, fam, N in corpus_pairs(ctx.manifest):
        E = fam.group

        def run(E=E, N=N, spec=spec, tag=tag):
            D = relative_dimension_subgroup(E, N, 3)
            q = D.order // relative_lower_bound(E, N, 3).order
            G, _ = E.quotient(N)
            Gab, _ = G.abelianization()
            ets = ext_tor_square(Gab).group.order()
            return CheckRecord(f"d3free-shadow/{spec}/N={tag}",
                               "|D_3(E,N)/N' gamma_3(E)| divides |(E/N)_ab ^* (E/N)_ab|",
                               {"group": spec, "N": tag}, f"divides {ets}", str(q), ets % q == 0)
        yield _timed(run)


def suite_kerdel3(ctx: "Context") -> Iterator[CheckRecord]:
    for order in (2, 4, 8, 16, 32, 64):
        for inv in all_abelian_invariants(order):
            if len(inv) > 3 or (ctx.group is not None and A_spec(inv) != ctx.group):
                continue
            A = abelian_from_invariants(list(inv))

            def run(A=A, inv=inv):
                ker, claimed = kerdel3_brute_force(A)
                return CheckRecord(f"kerdel3/{A.structure()}",
                                   "Ker delta_3 = <tau_m(x1, 2 x2) : m x1 = 2 m x2 = 0>",
                                   {"A": A.structure()}, f"rank {ker.rank}, index {_index(ker)}",
                                   f"rank {claimed.rank}, index {_index(claimed)}", ker == claimed)
            yield _timed(run)


def A_spec(inv) -> str:
    return "abelian:" + ",".join(map(str, inv))


def _index(L) -> int:
    return L.determinant() if L.rank == L.ambient_rank else 0


def _class2_targets(ctx: "Context"):
    for fam in corpus_groups(ctx.manifest, abelian=False):
        E = fam.group
        c = E.nilpotency_class
        if c <= 2:
            yield fam.spec, E
        elif c == 3:
            G, _ = E.quotient(E.gamma(3))
            G.name = f"{fam.spec}/gamma3"
            yield G.name, G


def suite_expo2(ctx: "Context") -> Iterator[CheckRecord]:
    for spec, G in _class2_targets(ctx):
        D = class2_data(G)
        maps = delta_maps(D, seed=ctx.seed)
        bound = kerrho2_bound(D, maps)
        e = bound.exponent() if bound.order() > 1 else 1
        yield CheckRecord(f"expo2/{spec}/exponent", "2 delta_1(Ker delta_2 ∩ Ker delta_3) = 0",
                          {"group": spec}, "exponent divides 2", f"{bound.structure()} (exponent {e})",
                          2 % e == 0)
        if maps.descends["delta1"] and maps.descends["delta2"]:
            ok = expo2_identity(maps)
            yield CheckRecord(f"expo2/{spec}/identity", "2 delta_1 = -beta delta_2", {"group": spec},
                              "maps agree", "maps agree" if ok else "maps differ", ok)
        else:
            yield CheckRecord(f"expo2/{spec}/identity", "2 delta_1 = -beta delta_2", {"group": spec},
                              "maps agree", "not applicable: delta_1 does not vanish on tau_{o(x)}(x, x)",
                              None)
        same = shuffled_consistency(G, seed=ctx.seed + 1)
        yield CheckRecord(f"expo2/{spec}/choices", "delta maps do not depend on lifts or f choices",
                          {"group": spec}, "identical kernels and images", str(same), same)
        yield CheckRecord(f"expo2/{spec}/delta3-descends", "delta_3 vanishes on tau_{o(x)}(x, x)",
                          {"group": spec}, "true", str(maps.descends["delta3"]), maps.descends["delta3"])


def suite_d4(ctx: "Context") -> Iterator[CheckRecord]:
    for fam in corpus_groups(ctx.manifest):
        G = fam.group
        if G.nilpotency_class > 4:
            continue

        def run(G=G, spec=fam.spec):
            D4 = dimension_subgroup(G, 4)
            s, o, e = subquotient(G, D4, G.gamma(4))
            return CheckRecord(f"d4/{spec}/exponent", "D_4(G)/gamma_4(G) has exponent dividing 2",
                               {"group": spec}, "exponent divides 2", f"{s} (exponent {e})", 2 % e == 0)
        yield _timed(run)
        Gab, _ = G.abelianization()
        if ext_tor_square(Gab).group.is_trivial:
            def run4(G=G, spec=fam.spec):
                D4 = dimension_subgroup(G, 4)
                return CheckRecord(f"d4/{spec}/4dim", "G_ab ^* G_ab = 0 implies D_4(G) = gamma_4(G)",
                                   {"group": spec}, f"|gamma_4| = {G.gamma(4).order}", f"|D_4| = {D4.order}",
                                   D4 == G.gamma(4))
            yield _timed(run4)
        if G.nilpotency_class == 3:
            def run3(G=G, spec=fam.spec):
                rep = d4_check(G)
                return CheckRecord(f"d4/{spec}/kerrho2", "|D_4(E)/gamma_4(E)| divides |delta_1(Ker delta_2 ∩ Ker delta_3)|",
                                   {"group": spec}, f"divides {rep.bound_order}", str(rep.quotient_order),
                                   rep.passed)
            yield _timed(run3)


DEFAULT_RELATORS = {2: ["[1,2]", "[1,2]^2", "[1,2]^2;1^4", "[1,2,1]"], 3: ["[1,2]^2;3^2", "[1,2];[2,3]^3"]}


def suite_sjogren(ctx: "Context") -> Iterator[CheckRecord]:
    for rank, rels in DEFAULT_RELATORS.items():
        for text in rels:
            relators = parse_relators(text, rank)
            for n in (1, 2, 3):
                def run(relators=relators, rank=rank, n=n, text=text):
                    rep = sjogren_inclusion_check(relators, rank, n, samples=ctx.samples, seed=ctx.seed)
                    return CheckRecord(f"sjogren/r={rank}/{text}/n={n}",
                                       "R(n-1) gamma_{n+1}(F) ⊆ F ∩ (1 + r(n-1) + f^(n+1))",
                                       {"rank": rank, "relators": text, "n": n, "samples": rep.samples},
                                       "0 failures", f"{rep.failures} failures", rep.passed)
                yield _timed(run)
    for rank in (2, 3):
        for k in (2, 3, 4):
            letters = [i % rank for i in range(k)]
            yield CheckRecord(f"sjogren/lie-degree/r={rank}/k={k}",
                              "expand(w) - 1 starts in degree k with the Lie leading term",
                              {"rank": rank, "letters": letters}, "true",
                              str(lie_degree_check(letters, rank, 4)), lie_degree_check(letters, rank, 4))


def suite_msq(ctx: "Context") -> Iterator[CheckRecord]:
    rng = random.Random(ctx.seed)
    cases = []
    for rank in (2, 3):
        for text in (["", "[1,2]", "[1,2]^2"] if rank == 2 else ["[1,2];[1,3]^2"]):
            cases.append((rank, text, parse_relators(text, rank), "fixed"))
        for _ in range(6):
            rels = []
            while not rels:
                rels = random_commutator_relators(rank, rng)
            cases.append((rank, "; ".join(str(r) for r in rels), rels, "random"))
    for rank, text, rels, source in cases:
        def run(rank=rank, text=text, rels=rels, source=source):
            rep = msq_equality(rels, rank, seed=ctx.seed)
            return CheckRecord(f"msq/r={rank}/{text or '-'}",
                               "F ∩ (1 + f(R-1) + (R-1)f + r(2) + f^4) = [R, F] gamma_4(F)",
                               {"rank": rank, "relators": text, "source": source},
                               "both inclusions",
                               f"lhs<=rhs {rep.lhs_in_rhs}, rhs<=lhs {rep.rhs_in_lhs}, sanity failures {rep.sanity_failures}",
                               rep.passed)
        yield _timed(run)
    yield from _idlemma_cases(rng)


def _idlemma_cases(rng: random.Random) -> Iterator[CheckRecord]:
    from .magnus import idlemma_check
    for rank in (2, 3):
        L = idlemma_lattice(rank)
        basis = [list(b) for b in L.basis]
        for c in (2, 3):
            for t in range(4):
                coeffs = [rng.randrange(-3, 4) for _ in basis]
                member = t % 2 == 0
                if member:
                    coeffs = [c * a for a in coeffs]
                else:
                    j = rng.randrange(len(basis))
                    coeffs[j] = c * coeffs[j] + rng.randrange(1, c)
                v = [sum(a * b[i] for a, b in zip(coeffs, basis)) for i in range(rank ** 3)]
                words = [w for w in _cube_words(rank)]
                u = TruncatedTensor(rank, 3, {w: x for w, x in zip(words, v) if x})
                got = idlemma_check(u, c)
                yield CheckRecord(f"idlemma/r={rank}/c={c}/{t}", "u ≡ c v_1 mod f^4 with v_1 in (F'-1)f",
                                  {"rank": rank, "c": c, "coefficients": coeffs}, str(member), str(got),
                                  got == member)


def _cube_words(rank: int):
    import itertools
    return list(itertools.product(range(rank), repeat=3))


def suite_functors(ctx: "Context") -> Iterator[CheckRecord]:
    for n in range(1, 33):
        A = cyclic(n)
        om = omega(A).group
        rr = r_functor(A).group
        yield CheckRecord(f"functors/omega/Z{n}", "Omega(Z/n) = Z/n", {"A": f"Z/{n}"},
                          _cyc(n), om.structure(), om.isomorphic(cyclic(n)))
        yield CheckRecord(f"functors/r/Z{n}", "R(Z/n) = Z/(2,n)", {"A": f"Z/{n}"},
                          _cyc(gcd(2, n)), rr.structure(), rr.isomorphic(cyclic(gcd(2, n))))
    Z = parse_abelian("Z")
    for name, F in (("omega", omega), ("r", r_functor)):
        g = F(Z).group
        yield CheckRecord(f"functors/{name}/Z", f"{name}(Z) = 0", {"A": "Z"}, "0", g.structure(), g.is_trivial)
    seen = set()
    for fam in corpus_groups(ctx.manifest):
        A, _ = fam.group.abelianization()
        key = A.invariants
        if key in seen:
            continue
        seen.add(key)

        def run(A=A):
            E, T = em_maps(A)
            ok = E.compose(T).equals(_identity_scaled(E.codomain, 2))
            return CheckRecord(f"functors/ET/{A.structure()}", "E T = 2 on Omega(A)", {"A": A.structure()},
                               "true", str(ok), ok)
        yield _timed(run)
    for order in range(1, 17):
        for inv in all_abelian_invariants(order):
            A = abelian_from_invariants(list(inv))

            def run(A=A):
                f = omega_comparison(A)
                ok = f.is_isomorphism()
                return CheckRecord(f"functors/omega-bruteforce/{A.structure()}",
                                   "structural Omega = presented Omega", {"A": A.structure()},
                                   "isomorphism", f"{f.domain.structure()} -> {f.codomain.structure()}", ok)
            yield _timed(run)
    for text in ("Z/2", "Z/4", "Z/2+Z/2", "Z/3", "Z"):
        A = parse_abelian(text)
        for tag in ("gamma", "omega", "r", "tor", "lambda2", "sp2"):
            def run(A=A, tag=tag, text=text):
                try:
                    q = quad_structure(tag, A)
                    return CheckRecord(f"functors/cross/{tag}/{text}", "cross effect and H/P diagram identities",
                                       {"A": text, "functor": tag}, "all identities hold",
                                       f"F(A|A) = {q.cross.structure()}", all(q.checks.values()))
                except AssertionError as exc:
                    return CheckRecord(f"functors/cross/{tag}/{text}", "cross effect and H/P diagram identities",
                                       {"A": text, "functor": tag}, "all identities hold", str(exc), False)
            yield _timed(run)


def _cyc(n: int) -> str:
    return "0" if n == 1 else f"Z/{n}"


def _identity_scaled(A: FPAbGroup, c: int):
    from .abelian import identity_hom
    return identity_hom(A).scale(c)


def suite_pbw(ctx: "Context") -> Iterator[CheckRecord]:
    groups = [("Z+Z", parse_abelian("Z+Z")), ("Z+Z+Z", parse_abelian("Z+Z+Z"))]
    seen = set()
    for fam in corpus_groups(ctx.manifest):
        if fam.group.nilpotency_class <= 1 and fam.group.order <= 64:
            A, _ = fam.group.abelianization()
            if A.invariants not in seen:
                seen.add(A.invariants)
                groups.append((A.structure(), A))
    for name, A in groups:
        def run(A=A, name=name):
            rep = pbw_check(A, order_cap=64)
            return CheckRecord(f"pbw/{name}", "0 -> L_3 + A(x)L_2 -> A^(x)3 -> SP^3 -> 0 is exact",
                               {"A": name}, "exact",
                               f"injective {rep.injective}, middle {rep.exact_middle}, surjective {rep.surjective}",
                               rep.exact)
        yield _timed(run)


SUITES: dict[str, Callable[["Context"], Iterator[CheckRecord]]] = {
    "d2d3": suite_d2d3,
    "d3rel": suite_d3rel,
    "d3free-shadow": suite_d3free,
    "cex": suite_cex,
    "kerdel3": suite_kerdel3,
    "expo2": suite_expo2,
    "d4": suite_d4,
    "sjogren": suite_sjogren,
    "msq": suite_msq,
    "functors": suite_functors,
    "pbw": suite_pbw,
}


@dataclass
class Context:
    seed: int = 0
    manifest: Manifest | None = None
    samples: int = 40
    group: str | None = None


def run_suites(names: list[str] | None = None, seed: int = 0, manifest_path: str | None = None,
               samples: int = 40, group: str | None = None) -> VerificationReport:
    """Run the named suites (all by default); ``group`` restricts corpus suites to one family spec."""
    names = list(names or SUITES)
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
    manifest = load_manifest(manifest_path)
    if group is not None:
        build_family(group)
        manifest = Manifest(manifest.version, (), (group,))
    ctx = Context(seed, manifest, samples, group)
    rep = VerificationReport(names, seed)
    for n in names:
        rep.records.extend(SUITES[n](ctx))
    return rep


__all__ = ["CheckRecord", "VerificationReport", "SUITES", "run_suites", "SCHEMA", "Context"]
