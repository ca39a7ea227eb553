import itertools

from hypothesis import given
from hypothesis import strategies as st

from dimquot.linalg import (
    Lattice,
    check_unimodular,
    determinant,
    hnf_modular,
    hnf_rows,
    invariant_factors,
    lattice_intersect,
    left_kernel,
    matmul,
    quotient_invariants,
    snf,
    solve_left,
)

small = st.integers(min_value=-9, max_value=9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def box_members(L: Lattice, bound: int):
    """All lattice points reachable with small coefficients (brute force oracle)."""
    pts = set()
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=L.rank):
        v = [0] * L.ambient_rank
        for c, b in zip(coeffs, L.basis):
            for i, x in enumerate(b):
                v[i] += c * x
        pts.add(tuple(v))
    return pts


def test_hnf_examples():
    assert Lattice([[0, 1], [1, 0]], 2).basis == ((1, 0), (0, 1))
    assert Lattice([[2, 4], [6, 8]], 2).basis == ((2, 0), (0, 4))
    assert Lattice([[0, 0]], 2).rank == 0


def test_snf_examples():
    assert invariant_factors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert invariant_factors([[0, 0, 0], [0, 0, 0]]) == [0, 0]


def test_intersection_examples():
    two = Lattice.full(2).scaled(2)
    three = Lattice.full(2).scaled(3)
    assert lattice_intersect(two, three) == Lattice.full(2).scaled(6)
    L = Lattice([[3, 1], [0, 5]], 2)
    assert L.intersect(L) == L
    # span{(1,1)} ∩ span{(1,-1)} is zero: the two lines meet only at the origin
    a, b = Lattice([[1, 1]], 2), Lattice([[1, -1]], 2)
    assert a.intersect(b).rank == 0
    assert box_members(a, 10) & box_members(b, 10) == {(0, 0)}


def test_membership_and_quotients():
    assert Lattice.zero(3).contains([0, 0, 0])
    assert not Lattice.full(2).scaled(2).contains([1, 0])
    assert Lattice([[2, 0], [0, 3]], 2).contains([4, 6])
    L = Lattice([[1, 2], [3, 5]], 2)
    assert quotient_invariants(L, L) == ([], 0)
    assert quotient_invariants(Lattice.full(2).scaled(2), Lattice.full(2)) == ([2, 2], 0)
    assert quotient_invariants(Lattice([[2, 0]], 2), Lattice.full(2)) == ([2], 1)


@given(matrices())
def test_snf_certificate(M):
    D, U, V = snf(M)
    assert check_unimodular(U) and check_unimodular(V)
    assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@given(matrices())
def test_hnf_is_canonical(M):
    n = len(M[0])
    H = hnf_rows(M, n)
    assert Lattice(H, n) == Lattice(M, n)
    # row space is the same: every input row is a member and every HNF row is a combination
    L = Lattice(M, n)
    for r in M:
        assert L.contains(r)
    for r in H:
        assert solve_left(M, r) is not None
    # permuting and adding rows does not change the canonical form
    M2 = list(reversed(M)) + [[a + b for a, b in zip(M[0], M[-1])]]
    assert Lattice(M2, n) == L


@given(matrices(3, 3), st.integers(1, 30))
def test_modular_hnf_matches_when_full_rank(M, m):
    n = len(M[0])
    # with m * Z^n included the modular algorithm must agree with the plain one
    rows = [list(r) for r in M] + [[m * int(i == j) for j in range(n)] for i in range(n)]
    assert Lattice(hnf_modular(M, n, m), n, _checked=True) == Lattice(rows, n)


@given(matrices(3, 3), matrices(3, 3))
def test_intersection_properties(A, B):
    n = min(len(A[0]), len(B[0]))
    A = [r[:n] for r in A]
    B = [r[:n] for r in B]
    La, Lb = Lattice(A, n), Lattice(B, n)
    I = La.intersect(Lb)
    assert La.contains_lattice(I) and Lb.contains_lattice(I)
    assert I == Lb.intersect(La)
    # brute force: small members of both lie in the intersection
    for v in box_members(La, 2) & box_members(Lb, 2):
        assert I.contains(list(v))


@given(matrices(4, 3))
def test_left_kernel(M):
    K = left_kernel(M, len(M))
    for k in K:
        assert all(sum(k[i] * M[i][j] for i in range(len(M))) == 0 for j in range(len(M[0])))
    rank = Lattice(M, len(M[0])).rank
    assert len(K) == len(M) - rank


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_snf(M):
    d = invariant_factors(M)
    prod = 1
    for x in d:
        prod *= x
    assert abs(determinant(M)) == prod


def test_big_integers_exact():
    big = 10**30 + 7
    L = Lattice([[big, 0], [0, big * 3]], 2)
    assert L.contains([2 * big, 3 * big])
    assert not L.contains([big, big])
    assert quotient_invariants(L, Lattice.full(2)) == ([big, 3 * big], 0)
