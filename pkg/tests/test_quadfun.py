from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.abelian import abelian_from_invariants, all_abelian_invariants, cyclic, identity_hom, parse_abelian
from dimquot.quadfun import (
    FUNCTORS,
    QUADRATIC_TAGS,
    GradedAbGroup,
    em_maps,
    ext_tor_square,
    omega,
    omega_comparison,
    quad_structure,
    r_functor,
    square_functor,
)

invs = st.lists(st.integers(2, 12), min_size=1, max_size=3)


def group_of(orders):
    return abelian_from_invariants([o for o in orders if o != 1])


def pairs(ds):
    return [gcd(a, b) for i, a in enumerate(ds) for b in ds[i + 1:]]


# closed forms for a direct sum of cyclic groups, one summand per factor plus pairwise cross terms
def gamma_formula(ds):
    return [d if d % 2 else 2 * d for d in ds] + pairs(ds)


def omega_formula(ds):
    return list(ds) + pairs(ds)


def r_formula(ds):
    return [gcd(2, d) for d in ds] + pairs(ds)


def lambda2_formula(ds):
    return pairs(ds)


def sp2_formula(ds):
    return list(ds) + pairs(ds)


@pytest.mark.parametrize("n", range(1, 33))
def test_cyclic_values(n):
    assert omega(cyclic(n)).group.isomorphic(cyclic(n))
    assert r_functor(cyclic(n)).group.isomorphic(cyclic(gcd(2, n)))
    assert ext_tor_square(cyclic(n)).group.is_trivial


def test_free_values():
    Z = parse_abelian("Z")
    assert omega(Z).group.is_trivial
    assert r_functor(Z).group.is_trivial
    assert ext_tor_square(Z).group.is_trivial
    E, T = em_maps(Z)
    assert E.is_zero() and T.is_zero()


def test_small_examples():
    assert omega(parse_abelian("Z/2+Z/4")).group.isomorphic(parse_abelian("Z/2+Z/4+Z/2"))
    assert ext_tor_square(parse_abelian("Z/2+Z/2")).group.invariants == (2,)
    assert ext_tor_square(parse_abelian("Z/2+Z/4")).group.invariants == (2,)
    for tag in QUADRATIC_TAGS:
        assert FUNCTORS[tag](parse_abelian("0")).group.is_trivial


@given(invs)
def test_closed_forms(ds):
    A = abelian_from_invariants(ds)
    ds = [d for d in A.invariants]
    assert FUNCTORS["gamma"](A).group.isomorphic(group_of(gamma_formula(ds)))
    assert omega(A).group.isomorphic(group_of(omega_formula(ds)))
    assert r_functor(A).group.isomorphic(group_of(r_formula(ds)))
    assert FUNCTORS["lambda2"](A).group.isomorphic(group_of(lambda2_formula(ds)))
    assert FUNCTORS["sp2"](A).group.isomorphic(group_of(sp2_formula(ds)))
    assert ext_tor_square(A).group.isomorphic(group_of(pairs(ds)))


@given(invs)
def test_em_composite_is_doubling(ds):
    A = abelian_from_invariants(ds)
    E, T = em_maps(A)
    assert E.compose(T).equals(identity_hom(omega(A).group).scale(2))


def test_em_on_z2():
    E, T = em_maps(cyclic(2))
    # T(w_2(1)) = tau_2(1,1) and E of that is 2 w_2(1) = 0 in Omega(Z/2)
    assert T.matrix == [[1]]
    assert E.compose(T).is_zero()


@pytest.mark.parametrize("inv", [inv for n in range(1, 13) for inv in all_abelian_invariants(n)])
def test_omega_bruteforce(inv):
    A = abelian_from_invariants(list(inv))
    assert omega_comparison(A).is_isomorphism()


@pytest.mark.parametrize("tag", QUADRATIC_TAGS)
@pytest.mark.parametrize("spec", ["Z/2", "Z/4", "Z/2+Z/2", "Z/3+Z/6", "Z", "Z/2+Z"])
def test_cross_effect_identities(tag, spec):
    A = parse_abelian(spec)
    q = quad_structure(tag, A)
    assert all(q.checks.values())


@pytest.mark.parametrize("spec", ["Z/2+Z/2", "Z/4+Z/6", "Z/2+Z/8"])
def test_omega_and_r_cross_effect_is_tor(spec):
    from dimquot.abelian import tor
    A = parse_abelian(spec)
    t = tor(A, A).group
    assert quad_structure("omega", A).cross.isomorphic(t)
    assert quad_structure("r", A).cross.isomorphic(t)


def test_ext_tor_vanishing_criterion():
    # A ^* A = 0 iff every primary part is cyclic
    for n in range(1, 65):
        for inv in all_abelian_invariants(n):
            A = abelian_from_invariants(list(inv))
            primary_cyclic = all(gcd(a, b) == 1 for i, a in enumerate(inv) for b in inv[i + 1:])
            assert ext_tor_square(A).group.is_trivial == primary_cyclic


def test_square_functors():
    A = GradedAbGroup({1: cyclic(2)})
    assert square_functor(A, "torsion").structure() == {2: "Z/2"}
    assert square_functor(A, "tensor").structure() == {2: "Z/4"}
    B = GradedAbGroup({0: parse_abelian("Z/2+Z/2")})
    assert square_functor(B, "tensor").structure() == {0: "Z/2"}
    assert square_functor(GradedAbGroup(), "tensor").components == {}
    with pytest.raises(ValueError):
        square_functor(A, "other")
