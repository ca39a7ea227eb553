"""Functoriality, exactness and relation laws for the abelian functors."""

import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.abelian import (
    AbHom,
    GammaGroup,
    TorGroup,
    abelian_from_invariants,
    all_abelian_invariants,
    direct_sum,
    hom_decompose,
    identity_hom,
    lambda2,
    sp,
    tensor,
)
from dimquot.liefun import lie_component, lie_map, tensor_power_map
from dimquot.quadfun import omega_bruteforce

two_groups = st.lists(st.sampled_from([2, 4, 8]), min_size=1, max_size=3)
finite_groups = st.lists(st.integers(2, 12), min_size=1, max_size=3)


def killed_by(A, m, rng):
    """A random element ``x`` of ``A`` with ``m x = 0``."""
    y = []
    for d in A.invariants:
        g = gcd(d, m)
        y.append(rng.randrange(g) * (d // g) if d else 0)
    return A.from_canonical(y)


def random_surjection(B, rng):
    """``q : B -> B/K`` for a random finite subgroup ``K``."""
    K = [B.random_element(rng) for _ in range(rng.randrange(1, 3))]
    A = B.quotient(K)
    return AbHom(B, A, [B.gen(i) for i in range(B.ngens)]), A


@given(two_groups, two_groups, st.integers(0, 10 ** 6))
def test_right_exactness(bs, cs, seed):
    rng = random.Random(seed)
    B, C = abelian_from_invariants(bs), abelian_from_invariants(cs)
    q, A = random_surjection(B, rng)
    idC = identity_hom(C)
    assert tensor(B, C).map(q, idC, tensor(A, C)).is_surjective()
    assert lambda2(B).map(q, lambda2(A)).is_surjective()
    for n in (1, 2, 3):
        assert sp(B, n).map(q, sp(A, n)).is_surjective()
    assert GammaGroup(B).map(q, GammaGroup(A)).is_surjective()


@given(finite_groups, st.integers(0, 10 ** 6))
def test_gamma_presentation_sequence(bs, seed):
    # Gamma(A) + A (x) B -> Gamma(B) -> Gamma(C) -> 0 for C = B/A
    rng = random.Random(seed)
    B = abelian_from_invariants(bs)
    elems = [B.random_element(rng) for _ in range(rng.randrange(1, 3))]
    A, f = B.subgroup(elems)
    C = B.quotient(elems)
    p = AbHom(B, C, [B.gen(i) for i in range(B.ngens)])
    GA, GB, GC = GammaGroup(A), GammaGroup(B), GammaGroup(C)
    Gp = GB.map(p, GC)
    assert Gp.is_surjective()
    TAB = tensor(A, B)
    w_rows = [GB.w(f(A.gen(i)), B.gen(j)) for i in range(A.ngens) for j in range(B.ngens)]
    left_rows = GA.map(f, GB).matrix + w_rows
    left = AbHom(direct_sum(GA.group, TAB.group), GB.group, left_rows)
    assert Gp.compose(left).is_zero()
    image = hom_decompose(left).image
    assert image.order() * GC.group.order() == GB.group.order()


@pytest.mark.parametrize("invs", [(2,), (4,), (2, 2), (2, 4), (3, 6), (4, 8, 0), (0, 0), (2, 0)])
def test_delta_w_is_symmetrisation(invs):
    A = abelian_from_invariants(invs)
    T = tensor(A, A)
    G = GammaGroup(A)
    k = A.ngens
    swap = AbHom(T.group, T.group, [T.pure(A.gen(j), A.gen(i)) for i in range(k) for j in range(k)])
    assert G.delta_map(T).compose(G.w_map(T)).equals(identity_hom(T.group) + swap)


@given(finite_groups, finite_groups)
def test_tor_symmetry(a, c):
    A, C = abelian_from_invariants(a), abelian_from_invariants(c)
    TAC, TCA = TorGroup(A, C), TorGroup(C, A)
    s = TAC.swap(TCA)
    assert s.is_isomorphism()
    assert TCA.swap(TAC).compose(s).equals(identity_hom(TAC.group))


@given(finite_groups, finite_groups, st.integers(0, 10 ** 6))
def test_tor_defining_relations(a, c, seed):
    rng = random.Random(seed)
    A, C = abelian_from_invariants(a), abelian_from_invariants(c)
    T = TorGroup(A, C)
    eq = T.group.equal
    add = lambda x, y: [u + v for u, v in zip(x, y)]
    scale = lambda k, x: [k * u for u in x]
    for _ in range(5):
        m, n = rng.randint(1, 12), rng.randint(1, 6)
        a1, a2, c0 = killed_by(A, m, rng), killed_by(A, m, rng), killed_by(C, m, rng)
        assert eq(T.tau(add(a1, a2), m, c0), add(T.tau(a1, m, c0), T.tau(a2, m, c0)))
        c1, c2 = killed_by(C, m, rng), killed_by(C, m, rng)
        assert eq(T.tau(a1, m, add(c1, c2)), add(T.tau(a1, m, c1), T.tau(a1, m, c2)))
        big_a = killed_by(A, m * n, rng)
        assert eq(T.tau(big_a, m * n, c0), T.tau(scale(n, big_a), m, c0))
        big_c = killed_by(C, m * n, rng)
        assert eq(T.tau(a1, m * n, big_c), T.tau(a1, m, scale(n, big_c)))


SMALL = [inv for order in range(2, 17) for inv in all_abelian_invariants(order)]


@pytest.mark.parametrize("invs", SMALL, ids=lambda v: "+".join(map(str, v)))
def test_omega_w_is_quadratic_in_bruteforce(invs):
    A = abelian_from_invariants(invs)
    G, symbols = omega_bruteforce(A)
    index = {x: t for t, (_, x) in enumerate(symbols)}
    order = {x: o for o, x in symbols}
    e = A.exponent()

    def w(n, x):
        v = [0] * G.ngens
        v[index[x]] = n // order[x]
        return v

    for x in index:
        for n in range(order[x], e + 1, order[x]):
            for m in range(1, e + 1):
                mx = A.to_canonical([m * v for v in A.from_canonical(x)])
                assert G.equal(w(n, mx), [m * m * v for v in w(n, x)]), (n, m, x)


@given(two_groups, two_groups, st.integers(0, 10 ** 6), st.integers(2, 3))
def test_lie_naturality(a, b, seed, n):
    rng = random.Random(seed)
    A, B = abelian_from_invariants(a), abelian_from_invariants(b)
    f = AbHom(A, B, [killed_by(B, A.element_order(A.gen(i)), rng) for i in range(A.ngens)])
    lhs = tensor_power_map(f, n).compose(lie_component(A, n).l)
    rhs = lie_component(B, n).l.compose(lie_map(f, n))
    assert lhs.equals(rhs)
