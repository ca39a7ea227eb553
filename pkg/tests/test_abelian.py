import itertools
import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.abelian import (
    AbelianGroupError,
    AbHom,
    FPAbGroup,
    abelian_from_invariants,
    all_abelian_invariants,
    cyclic,
    direct_sum,
    gamma,
    gamma_cyclic_bruteforce,
    hom_decompose,
    identity_hom,
    lambda2,
    parse_abelian,
    sp,
    tensor,
    tor,
    zero_hom,
)
from dimquot.linalg import determinant

orders = st.integers(0, 12)
relmats = st.integers(1, 3).flatmap(
    lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=0, max_size=4)
    .map(lambda rows: (k, rows))
)


def inv_of(*ds):
    return sorted(d for d in ds if d != 1)


def test_presentations():
    assert FPAbGroup(["a"], [[2]]).structure() == "Z/2"
    assert FPAbGroup(["a", "b"], [[2, 0], [0, 4]]).invariants == (2, 4)
    assert FPAbGroup(["a"]).structure() == "Z"
    assert parse_abelian("Z/2+Z/4+Z").invariants == (2, 4, 0)
    assert parse_abelian("0").is_trivial
    with pytest.raises(AbelianGroupError):
        parse_abelian("Z/x")
    with pytest.raises(AbelianGroupError):
        FPAbGroup(["a"], [[1, 2]])


def test_hom_examples():
    Z4 = cyclic(4)
    dec = hom_decompose(identity_hom(Z4))
    assert dec.kernel.is_trivial and dec.cokernel.is_trivial
    dec = hom_decompose(identity_hom(Z4).scale(2))
    assert dec.kernel.invariants == (2,)
    assert dec.image.invariants == (2,)
    assert dec.cokernel.invariants == (2,)
    dec = hom_decompose(zero_hom(cyclic(2), cyclic(3)))
    assert dec.kernel.invariants == (2,) and dec.cokernel.invariants == (3,)
    with pytest.raises(AbelianGroupError):
        AbHom(cyclic(2), cyclic(3), [[1]])


def test_tensor_and_tor_examples():
    assert tensor(cyclic(2), cyclic(3)).group.is_trivial
    assert tensor(cyclic(4), cyclic(6)).group.invariants == (2,)
    A = parse_abelian("Z/3+Z/5+Z")
    assert tensor(parse_abelian("Z"), A).group.isomorphic(A)
    assert tor(cyclic(4), cyclic(6)).group.invariants == (2,)
    assert tor(parse_abelian("Z"), A).group.is_trivial
    V = parse_abelian("Z/2+Z/2")
    assert tor(V, V).group.invariants == (2, 2, 2, 2)


def test_small_functor_examples():
    V = parse_abelian("Z/2+Z/2")
    assert lambda2(V).group.invariants == (2,)
    assert gamma(cyclic(2)).group.invariants == (4,)
    assert sp(V, 3).group.invariants == (2, 2, 2, 2)


@pytest.mark.parametrize("d", range(1, 9))
def test_gamma_cyclic_against_bruteforce(d):
    # the oracle presents Gamma(Z/d) on all elements of Z/d
    assert gamma(cyclic(d)).group.invariants == tuple(x for x in gamma_cyclic_bruteforce(d) if x != 1)


def test_all_abelian_invariants_counts():
    # number of abelian groups of order p^k is the partition number of k
    assert [len(all_abelian_invariants(2 ** k)) for k in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert len(all_abelian_invariants(72)) == 3 * 2
    for n in range(1, 65):
        for inv in all_abelian_invariants(n):
            assert abelian_from_invariants(list(inv)).order() == n


@given(relmats)
def test_order_matches_determinant(km):
    k, rows = km
    A = FPAbGroup(k, rows)
    if A.rel.rank == k:
        assert A.order() == abs(determinant([list(r) for r in A.rel.basis]))
    else:
        assert A.order() == 0 and A.free_rank == k - A.rel.rank


@given(relmats, st.integers(0, 2**16))
def test_canonical_round_trip(km, seed):
    k, rows = km
    A = FPAbGroup(k, rows)
    rng = random.Random(seed)
    x = [rng.randrange(-20, 20) for _ in range(k)]
    y = A.from_canonical(A.to_canonical(x))
    assert A.equal(x, y)
    assert A.normal_form(x) == A.normal_form(y)
    r = A.rel.basis[0] if A.rel.rank else [0] * k
    assert A.equal([a + 3 * b for a, b in zip(x, r)], x)


@given(st.lists(st.integers(2, 12), min_size=1, max_size=2), st.lists(st.integers(2, 12), min_size=1, max_size=2))
def test_tensor_tor_bilinear(a, b):
    A, B = abelian_from_invariants(a), abelian_from_invariants(b)
    expect = inv_of(*(gcd(x, y) for x in A.invariants for y in B.invariants))
    assert tensor(A, B).group.isomorphic(abelian_from_invariants(expect))
    assert tor(A, B).group.isomorphic(abelian_from_invariants(expect))


@given(st.lists(st.integers(1, 8), min_size=1, max_size=3))
def test_element_enumeration(inv):
    A = abelian_from_invariants(inv)
    els = {tuple(A.to_canonical(x)) for x in A.elements()}
    assert len(els) == A.order()
    for x in itertools.islice(A.elements(), 20):
        assert A.is_zero([A.element_order(x) * v for v in x])


def test_direct_sum_and_subgroup():
    A = direct_sum(cyclic(4), cyclic(6))
    assert A.isomorphic(abelian_from_invariants([2, 12]))
    S, inc = A.subgroup([[2, 0], [0, 3]])
    assert S.order() == 4 and hom_decompose(inc).kernel.is_trivial
    Q = A.quotient([[2, 0], [0, 3]])
    assert Q.order() == 6
