import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.magnus import (
    FreeWord,
    MagnusCapError,
    MagnusError,
    TruncatedTensor,
    aug,
    comm,
    filtration_lattices,
    idlemma_check,
    lie_degree_check,
    magnus_expand,
    msq_equality,
    parse_relators,
    parse_word,
    random_commutator_relators,
    random_word,
    sjogren_inclusion_check,
)

x1, x2, x3 = (FreeWord.gen(3, i) for i in range(3))
words = st.lists(st.tuples(st.integers(0, 2), st.sampled_from((1, -1))), max_size=8).map(
    lambda ls: FreeWord(3, tuple(ls)))


def T(d, coeffs):
    return TruncatedTensor(3, d, coeffs)


def test_expansion_examples():
    assert magnus_expand(x1, 2).coeffs == {(): 1, (0,): 1}
    c = magnus_expand(comm(x1, x2), 2)
    assert c.coeffs == {(): 1, (0, 1): 1, (1, 0): -1}
    assert magnus_expand(x1 * x1.inverse(), 4).coeffs == {(): 1}
    assert len(x1 * x1.inverse()) == 0


@given(words, words)
def test_expansion_is_multiplicative(u, v):
    assert magnus_expand(u * v, 4) == magnus_expand(u, 4) * magnus_expand(v, 4)
    assert magnus_expand(u * u.inverse(), 4) == TruncatedTensor.one(3, 4)


@given(words, words, words)
def test_commutator_degree_bound(a, b, c):
    # gamma_k(F) - 1 lies in f^k
    for w, k in ((comm(a, b), 2), (comm(comm(a, b), c), 3)):
        m = aug(w, 4).min_degree()
        assert m is None or m >= k


@pytest.mark.parametrize("letters,rank", [([0, 1], 2), ([0, 1, 0], 2), ([0, 1, 2], 3), ([1, 0, 0, 1], 2)])
def test_lie_leading_term(letters, rank):
    assert lie_degree_check(letters, rank, 4)


def test_parser():
    assert parse_word("[1,2]^2", 2) == comm(FreeWord.gen(2, 0), FreeWord.gen(2, 1)) ** 2
    assert parse_word("[1,2,1]", 2) == comm(comm(FreeWord.gen(2, 0), FreeWord.gen(2, 1)), FreeWord.gen(2, 0))
    assert parse_word("(1 2)^-1", 2) == (FreeWord.gen(2, 0) * FreeWord.gen(2, 1)).inverse()
    assert parse_word("1*2", 2) == FreeWord.gen(2, 0) * FreeWord.gen(2, 1)
    assert len(parse_relators("[1,2]; ;[1,2]^2", 2)) == 2
    for bad in ("[1]", "3", "[1,2", "1 ^", "a"):
        with pytest.raises(MagnusError):
            parse_word(bad, 2)


def test_filtrations():
    fl = filtration_lattices([], 2, 3)
    assert all(L.rank == 0 for L in fl.r)
    fl = filtration_lattices(parse_relators("[1,2]", 2), 2, 3)
    assert fl.r[0].contains_lattice(fl.r[1]) and fl.r[1].contains_lattice(fl.r[2])
    with pytest.raises(MagnusCapError):
        filtration_lattices([], 4, 3)
    with pytest.raises(MagnusCapError):
        magnus_expand(x1, 6)


@pytest.mark.parametrize("text,rank", [("[1,2]", 2), ("[1,2]^2", 2), ("[1,2]^2;1^4", 2), ("[1,2]^2;3^2", 3)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_sjogren_containment(text, rank, n):
    rep = sjogren_inclusion_check(parse_relators(text, rank), rank, n, samples=30, seed=n)
    assert rep.passed and rep.samples == 30


def test_sjogren_specific_elements():
    rels = parse_relators("[1,2]^2", 2)
    rho = rels[0]
    fl = filtration_lattices(rels, 2, 3)
    a, b = FreeWord.gen(2, 0), FreeWord.gen(2, 1)
    assert (fl.r[0] + fl.f[2]).contains(aug(rho, 3).vector())
    assert (fl.r[1] + fl.f[3]).contains(aug(comm(rho, a), 3).vector())
    w = comm(comm(comm(a, b), a), b)
    assert not any(aug(w, 3).vector())  # gamma_4 vanishes below degree 4
    # negative control: a generator is not in R gamma_2(F)
    assert not (fl.r[0] + fl.f[2]).contains(aug(a, 3).vector())


def _u():
    # degree 3 part of ([x1, x2] - 1) X3
    a = aug(comm(x1, x2), 3)
    t = TruncatedTensor.from_poly(3, 3, a.part(2)) * TruncatedTensor.monomial(3, 3, (2,))
    return t


def test_idlemma_examples():
    u = _u()
    assert not idlemma_check(u, 2)
    assert idlemma_check(u.scale(2), 2)
    assert idlemma_check(TruncatedTensor.zero(3, 3), 5)
    assert idlemma_check(u, 1)
    with pytest.raises(MagnusError):
        idlemma_check(TruncatedTensor.monomial(3, 3, (0,)), 2)


def test_msq_examples():
    assert msq_equality([], 2).lhs.rank == 0
    for text, rank in (("[1,2]", 2), ("[1,2]^2", 2), ("[1,2]^2;[1,2,1]", 2), ("[1,2];[2,3]^3", 3)):
        rep = msq_equality(parse_relators(text, rank), rank)
        assert rep.passed, text
    with pytest.raises(MagnusError):
        msq_equality(parse_relators("1", 2), 2)


@given(st.integers(0, 10**6), st.sampled_from((2, 3)))
def test_msq_random(seed, rank):
    rels = random_commutator_relators(rank, random.Random(seed))
    assert msq_equality(rels, rank, sanity_samples=3, seed=seed).passed


@given(st.integers(0, 10**6))
def test_random_word_reduced(seed):
    w = random_word(3, 10, random.Random(seed))
    assert all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w.letters, w.letters[1:]))
