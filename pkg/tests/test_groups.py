import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.groups import (
    ORDER_CAP,
    GroupError,
    ResourceCapError,
    build_family,
    cex,
    cyclic_group,
    dihedral,
    direct_product,
    group_from_dict,
    group_from_file,
    group_to_dict,
    heisenberg,
    quaternion,
    semidihedral,
)


def naive_closure(G, S):
    """Pure-python subgroup generation, used as an oracle for the numpy BFS."""
    H = {G.identity}
    frontier = list(H)
    S = list(S)
    while frontier:
        nxt = []
        for h in frontier:
            for s in S:
                g = int(G.table[h, s])
                if g not in H:
                    H.add(g)
                    nxt.append(g)
        frontier = nxt
    return H


def naive_lcs(G):
    terms = [set(range(G.order))]
    while True:
        comms = {G.comm(a, b) for a in terms[-1] for b in range(G.order)}
        nxt = naive_closure(G, comms)
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


FAMILIES = ["cyclic:5", "abelian:4,2", "heisenberg:2", "heisenberg:3", "heisenberg:4", "dihedral:8",
            "dihedral:16", "dihedral:32", "quaternion:8", "quaternion:16", "semidihedral:16", "cex:2,1,1",
            "dihedral:8*cyclic:2"]


@pytest.mark.parametrize("spec", FAMILIES)
def test_lower_central_series_matches_naive(spec):
    G = build_family(spec).group
    got = [set(H.elements_list) for H in G.lower_central_series]
    assert got == naive_lcs(G)


@pytest.mark.parametrize("spec,lcs", [
    ("abelian:4,2", [8]),
    ("heisenberg:4", [64, 4]),
    ("dihedral:16", [16, 4, 2]),
    ("dihedral:32", [32, 8, 4, 2]),
    ("quaternion:16", [16, 4, 2]),
    ("semidihedral:16", [16, 4, 2]),
    ("cex:2,1,1", [64, 4]),
])
def test_lcs_orders(spec, lcs):
    G = build_family(spec).group
    orders = [H.order for H in G.lower_central_series]
    if orders[-1] == 1:
        orders.pop()
    assert orders == lcs


def test_examples():
    C5 = cyclic_group(5)
    assert C5.order == 5 and all(int(C5.table[a, b]) == (a + b) % 5 for a in range(5) for b in range(5))
    H = heisenberg(2)
    assert H.commutator_subgroup(H.whole(), H.whole()).order == 2
    D = dihedral(16)
    r = D.generators[0]
    assert D.normal_closure([D.power(r, 2)]).order == 4
    assert D.closure([D.identity]).order == 1
    assert D.nilpotency_class == 3
    Q, _ = D.quotient(D.whole())
    assert Q.order == 1


@pytest.mark.parametrize("m", [2, 3, 4])
def test_heisenberg_relations_and_abelianization(m):
    G = heisenberg(m)
    x, y = G.generators
    z = G.comm(x, y)
    assert G.order == m ** 3
    assert G.power(x, m) == G.power(y, m) == G.identity
    assert G.comm(x, z) == G.comm(y, z) == G.identity
    assert G.element_order(z) == m
    A, _ = G.abelianization()
    assert A.invariants == (m, m)


def test_abelianizations_of_two_groups():
    for G in (dihedral(16), quaternion(16), semidihedral(16)):
        A, coords = G.abelianization()
        assert A.invariants == (2, 2)
        # the abelianization map is a homomorphism
        for a in range(G.order):
            for b in range(G.order):
                s = [u + v for u, v in zip(coords[a], coords[b])]
                assert A.equal(s, coords[G.mul(a, b)])


def test_quaternion_and_semidihedral_shapes():
    Q = quaternion(8)
    assert sorted(Q.element_order(g) for g in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
    S = semidihedral(16)
    orders = sorted(S.element_order(g) for g in range(16))
    assert orders.count(2) == 5 and orders.count(8) == 4


def test_cex_structure():
    fam = cex(2, 1, 1)
    E, N = fam.group, fam.subgroup
    assert E.order == 64 and N.order == 16
    assert E.is_normal(N)
    assert E.commutator_subgroup(N, N).order == 1
    assert E.gamma(3).order == 1
    G, _ = E.quotient(N)
    assert G.abelianization()[0].invariants == (2, 2)


def test_direct_product():
    G = direct_product(dihedral(8), cyclic_group(2))
    assert G.order == 16 and G.nilpotency_class == 2
    assert G.abelianization()[0].invariants == (2, 2, 2)


def test_file_round_trip(tmp_path):
    G = heisenberg(2)
    p = tmp_path / "g.json"
    p.write_text(json.dumps(group_to_dict(G)))
    H = group_from_file(str(p))
    assert np.array_equal(H.table, G.table)
    assert build_family(f"file:{p}").group.order == 8


def test_bad_tables():
    good = group_to_dict(cyclic_group(3))
    bad = dict(good, table=[0, 1, 2, 1, 2, 0, 2, 0, 0])
    with pytest.raises(GroupError):
        group_from_dict(bad)
    with pytest.raises(GroupError):
        group_from_dict(dict(good, table=good["table"][:-1]))
    with pytest.raises(GroupError):
        group_from_dict({"order": 3})
    # a Latin square that is not associative
    T = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        group_from_dict({"order": 5, "table": sum(T, []), "identity": 0, "generators": [1, 2]})


def test_caps_and_parse_errors():
    with pytest.raises(ResourceCapError):
        build_family(f"cyclic:{ORDER_CAP + 1}")
    with pytest.raises(ResourceCapError):
        build_family("heisenberg:30")
    with pytest.raises(GroupError):
        build_family("nosuch:3")
    with pytest.raises(GroupError):
        build_family("cyclic:a")
    with pytest.raises(GroupError):
        cex(2, 2, 1)


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_group_axioms_sampled(a, b, c):
    G = build_family("cex:2,1,1").group
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity
    # Hall-Witt style sanity in class 2: commutators are central
    z = G.comm(a, b)
    assert G.comm(z, c) == G.identity


@given(st.sampled_from(FAMILIES), st.data())
def test_closure_matches_naive(spec, data):
    G = build_family(spec).group
    S = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    assert set(G.closure(S).elements_list) == naive_closure(G, S)


@pytest.mark.parametrize("spec", ["heisenberg:3", "cex:2,1,1", "dihedral:16", "quaternion:16",
                                  "semidihedral:16", "dihedral:8*cyclic:2"])
def test_quotient_commutes_with_abelianization(spec):
    fam = build_family(spec)
    G = fam.group
    A, coords = G.abelianization()
    squares = G.closure([int(G.table[g, g]) for g in G.generators])
    for N in (G.gamma(3), G.gamma(2), squares, fam.subgroup):
        if N is None or not G.is_normal(N):
            continue
        Q, _ = G.quotient(N)
        image = A.quotient([coords[int(g)] for g in N.elements])
        assert Q.abelianization()[0].invariants == image.invariants
