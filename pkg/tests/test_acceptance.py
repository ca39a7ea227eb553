"""One test per acceptance criterion, each at its stated tolerance."""

import subprocess
import sys
import time
from math import gcd

import pytest

from dimquot.corpus import corpus_groups, corpus_pairs, load_manifest
from dimquot.verify import run_suites

MANIFEST = load_manifest()
_CACHE: dict = {}


def suite(name):
    if name not in _CACHE:
        t = time.perf_counter()
        rep = run_suites([name], seed=0)
        _CACHE[name] = (rep, time.perf_counter() - t)
    return _CACHE[name]


def records(rep, prefix=""):
    return [r for r in rep.records if r.check.startswith(prefix)]


def all_pass(recs):
    return bool(recs) and all(r.passed for r in recs)


def test_criterion_01_d2d3(record_criterion):
    rep, secs = suite("d2d3")
    groups = {r.inputs["group"] for r in rep.records}
    ok = all_pass(rep.records) and len(groups) >= 30 and "cex:2,1,1" in groups and secs < 300
    record_criterion(1, ok, f"D_n = gamma_n, n <= 3, on {len(groups)} groups in {secs:.1f}s")
    assert ok


def test_criterion_02_cex(record_criterion):
    rep, secs = suite("cex")
    by = {r.check: r for r in rep.records}
    needed = ["cex/z-nontrivial", "cex/z-in-D3", "cex/lower", "cex/z-order"]
    ok = all(by[k].passed for k in needed) and secs < 60
    record_criterion(2, ok, f"z in D_3(E,N), z != 1, N' gamma_3 = 1, order 2 mod it; {secs:.1f}s")
    assert ok


def test_criterion_03_d3rel(record_criterion):
    rep, _ = suite("d3rel")
    recs = records(rep, "d3rel/")
    tags = {(r.inputs["group"], r.inputs["N"]) for r in recs}
    has = {t for _, t in tags}
    ok = (all_pass(recs) and len(recs) >= 10 and ("cex:2,1,1", "N") in tags
          and {"E", "1", "gamma2"} <= has)
    record_criterion(3, ok, f"formula = group ring on {len(recs)} pairs")
    assert ok


def test_criterion_04_d3free_shadow(record_criterion):
    rep, _ = suite("d3free-shadow")
    cex_rep, _ = suite("cex")
    eq = [r for r in cex_rep.records if r.check == "cex/d3free-equality"]
    n_pairs = len(corpus_pairs(MANIFEST))
    ok = all_pass(rep.records) and len(rep.records) == n_pairs and all_pass(eq)
    record_criterion(4, ok, f"divisibility on {len(rep.records)} pairs, equality for cex(2,1,1)")
    assert ok


def test_criterion_05_fourth_dimension_exponent(record_criterion):
    rep, _ = suite("d4")
    expo = [r for r in rep.records if r.check.endswith("/exponent")]
    four = [r for r in rep.records if r.check.endswith("/4dim")]
    n_groups = len(corpus_groups(MANIFEST))
    cyclic_primary = 0
    for fam in corpus_groups(MANIFEST):
        inv = fam.group.abelianization()[0].invariants
        if all(gcd(a, b) == 1 for i, a in enumerate(inv) for b in inv[i + 1:]):
            cyclic_primary += 1
    ok = all_pass(expo) and len(expo) == n_groups and all_pass(four) and len(four) == cyclic_primary
    record_criterion(5, ok, f"exponent | 2 on {len(expo)} groups; D_4 = gamma_4 on {len(four)} "
                            "groups with cyclic primary parts")
    assert ok


def test_criterion_06_kerrho2(record_criterion):
    rep, _ = suite("d4")
    recs = [r for r in rep.records if r.check.endswith("/kerrho2")]
    class3 = [f.spec for f in corpus_groups(MANIFEST) if f.group.nilpotency_class == 3]
    ok = all_pass(recs) and len(recs) == len(class3) and len(class3) > 0
    record_criterion(6, ok, f"|D_4/gamma_4| divides the bound for {len(recs)} class-3 groups")
    assert ok


def test_criterion_07_functor_values(record_criterion):
    rep, _ = suite("functors")
    om = records(rep, "functors/omega/")
    rr = records(rep, "functors/r/")
    et = records(rep, "functors/ET/")
    bf = records(rep, "functors/omega-bruteforce/")
    abels = {f.group.abelianization()[0].invariants for f in corpus_groups(MANIFEST)}
    ok = (all_pass(rep.records) and len(om) == 33 and len(rr) == 33 and len(et) == len(abels)
          and len(bf) > 0)
    record_criterion(7, ok, f"Omega/R on Z/n (n <= 32) and Z, E T = 2 on {len(et)} abelianizations, "
                            f"{len(bf)} brute-force Omega comparisons")
    assert ok


def test_criterion_08_kerdel3(record_criterion):
    rep, _ = suite("kerdel3")
    ok = all_pass(rep.records) and len(rep.records) == 22
    record_criterion(8, ok, f"Ker delta_3 = lemma subgroup on {len(rep.records)} abelian 2-groups")
    assert ok


def test_criterion_09_pbw(record_criterion):
    rep, _ = suite("pbw")
    names = {r.inputs["A"] for r in rep.records}
    abel = [f for f in corpus_groups(MANIFEST) if f.group.nilpotency_class <= 1]
    ok = all_pass(rep.records) and {"Z+Z", "Z+Z+Z"} <= names and len(rep.records) == 2 + len(abel)
    record_criterion(9, ok, f"PBW sequence exact for Z^2, Z^3 and {len(abel)} abelian corpus groups")
    assert ok


def test_criterion_10_magnus(record_criterion):
    rep_m, t1 = suite("msq")
    rep_s, t2 = suite("sjogren")
    msq = records(rep_m, "msq/")
    random_sets = [r for r in msq if r.inputs["source"] == "random"]
    ranks = {r.inputs["rank"] for r in random_sets}
    idl = records(rep_m, "idlemma/")
    sj = records(rep_s, "sjogren/r=")
    per_n = {n: sum(r.inputs["samples"] for r in sj if r.inputs["n"] == n) for n in (1, 2, 3)}
    ok = (all_pass(msq) and len(random_sets) >= 10 and ranks == {2, 3} and all_pass(idl)
          and {r.computed for r in idl} == {"True", "False"} and all_pass(records(rep_s))
          and min(per_n.values()) >= 100 and t1 + t2 < 120)
    record_criterion(10, ok, f"msq on {len(random_sets)} random sets, Sjogren samples per n {per_n}, "
                             f"{len(idl)} idlemma verdicts; {t1 + t2:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_11_determinism(record_criterion, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        proc = subprocess.run([sys.executable, "-m", "dimquot.cli", "verify", "--seed", "0", "--json", str(path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    record_criterion(11, ok, f"two 'verify --seed 0' reports byte-identical ({len(outs[0])} bytes)")
    assert ok
