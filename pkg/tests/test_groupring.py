import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimquot.groupring import (
    GroupRingElement,
    aug_power,
    aug_power_exhaustive,
    dimension_report,
    dimension_subgroup,
    left_multiply,
    relative_dimension_subgroup,
    relative_ideal,
    relative_lower_bound,
    right_multiply,
)
from dimquot.groups import ResourceCapError, build_family, cyclic_group
from dimquot.linalg import Lattice

SMALL = ["cyclic:4", "abelian:2,2", "heisenberg:2", "dihedral:8", "quaternion:8", "dihedral:16",
         "quaternion:16", "semidihedral:16", "abelian:4,2"]


def exhaustive_relative(E, N, n):
    """nE + E^n spanned by all products, no modular shortcut."""
    m = E.order - 1
    rows = [list(b) for b in aug_power_exhaustive(E, n).basis]
    for h in N.elements_list:
        for g in range(E.order):
            x = GroupRingElement.difference(E, h) * GroupRingElement.difference(E, g)
            rows.append(x.reduced())
    return Lattice.from_generators(rows, m)


def scan(G, L):
    return {g for g in range(G.order)
            if g == G.identity or L.contains(GroupRingElement.difference(G, g).reduced())}


def test_cyclic_two():
    G = cyclic_group(2)
    g = 1 - G.identity
    assert aug_power(G, 1).lattice == Lattice.full(1)
    x = GroupRingElement.difference(G, g)
    # (g - 1)^2 = -2 (g - 1)
    assert (x * x).coords == tuple(-2 * c for c in x.coords)
    assert aug_power(G, 2).lattice == Lattice([[2]], 1)


@pytest.mark.parametrize("spec", SMALL)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_power_matches_exhaustive(spec, n):
    G = build_family(spec).group
    assert aug_power(G, n).lattice == aug_power_exhaustive(G, n)


@pytest.mark.parametrize("spec", SMALL)
def test_relative_matches_exhaustive(spec):
    E = build_family(spec).group
    for N in (E.trivial(), E.derived_subgroup, E.whole(), E.gamma(2).join(E.closure([E.generators[0]]))):
        if not E.is_normal(N):
            continue
        assert relative_ideal(E, N, 3).lattice == exhaustive_relative(E, N, 3)


@pytest.mark.parametrize("spec", SMALL + ["heisenberg:3", "cex:2,1,1"])
def test_dimension_subgroups_low_degree(spec):
    G = build_family(spec).group
    for n in (1, 2, 3):
        assert dimension_subgroup(G, n) == G.gamma(n)


@pytest.mark.parametrize("spec", SMALL)
def test_dimension_subgroup_by_scan(spec):
    G = build_family(spec).group
    assert set(dimension_subgroup(G, 4).elements_list) == scan(G, aug_power_exhaustive(G, 4))


@pytest.mark.parametrize("spec", ["dihedral:8", "heisenberg:2", "quaternion:16"])
def test_relative_edge_cases(spec):
    E = build_family(spec).group
    assert relative_dimension_subgroup(E, E.trivial(), 3) == dimension_subgroup(E, 3)
    for n in (2, 3, 4):
        assert relative_dimension_subgroup(E, E.whole(), n) == E.gamma(2)


def test_cex_relative():
    fam = build_family("cex:2,1,1")
    E, N = fam.group, fam.subgroup
    x, y = E.generators
    z = E.power(E.comm(x, y), 2)
    D = relative_dimension_subgroup(E, N, 3)
    assert z != E.identity and z in D
    assert relative_lower_bound(E, N, 3).order == 1
    assert D.order == 2


def test_two_sided_products():
    G = build_family("dihedral:8").group
    rng = __import__("random").Random(3)
    for _ in range(10):
        v = [rng.randrange(-3, 4) for _ in range(G.order - 1)]
        t = rng.randrange(G.order)
        a = GroupRingElement.from_reduced(G, v)
        tg = GroupRingElement.group_element(G, t)
        assert right_multiply(G, v, t) == (a * tg).reduced()
        assert left_multiply(G, t, v) == (tg * a).reduced()


@given(st.sampled_from(SMALL), st.data())
def test_ideal_membership_of_products(spec, data):
    G = build_family(spec).group
    n = data.draw(st.integers(1, 3))
    gs = data.draw(st.lists(st.integers(0, G.order - 1), min_size=n, max_size=n))
    x = GroupRingElement.group_element(G, G.identity)
    for g in gs:
        x = x * GroupRingElement.difference(G, g)
    if n == 1 and gs[0] == G.identity:
        return
    assert aug_power(G, n).contains(x)


def test_reports():
    rep = dimension_report(build_family("cyclic:8").group, 4)
    assert all(r.quotient_order == 1 for r in rep.rows)
    rep = dimension_report(build_family("dihedral:16").group, 4)
    assert all(2 % r.exponent == 0 for r in rep.rows)
    rep = dimension_report(build_family("heisenberg:3").group, 4)
    assert [r.order_gamma for r in rep.rows] == [27, 3, 1, 1]
    assert rep.as_dict()["rows"][3]["quotient"] == "0"
    with pytest.raises(ResourceCapError):
        dimension_report(build_family("cyclic:8").group, 6)
