"""Unit tests for integer lattice normal forms and graded ideals."""

import random

import pytest

from chowcalc.polyring import VarTable
from chowcalc.zgraded import (
    GradedError,
    GradedIdeal,
    hermite,
    primitive,
    row_hnf,
    smith,
    solve_row_combination,
)


def random_matrix(rng, m, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def mat_mul(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum(
        (-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]])
        for j in range(n)
    )


def test_row_hnf_properties():
    rng = random.Random(2)
    for _ in range(30):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = random_matrix(rng, m, n)
        H, U, pivots = row_hnf(M)
        # H = U * M and U unimodular
        assert mat_mul(U, M) == H
        assert det(U) in (1, -1)
        # echelon shape with positive pivots and reduced columns
        last_col = -1
        for r, c in pivots:
            assert c > last_col
            last_col = c
            assert H[r][c] > 0
            for i in range(r):
                assert 0 <= H[i][c] < H[r][c]


def test_row_hnf_canonical_under_row_shuffle():
    rng = random.Random(4)
    for _ in range(20):
        M = random_matrix(rng, 4, 4)
        H1, _, _ = row_hnf(M)
        shuffled = M[:]
        rng.shuffle(shuffled)
        H2, _, _ = row_hnf(shuffled)
        assert [r for r in H1 if any(r)] == [r for r in H2 if any(r)]


def test_hermite_small_known():
    assert hermite([[2, 4], [0, 2]]) == [[2, 0], [0, 2]]
    assert hermite([]) == []


def test_smith_properties():
    rng = random.Random(8)
    for _ in range(30):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = random_matrix(rng, m, n)
        D, U, V = smith(M)
        assert mat_mul(mat_mul(U, M), V) == D
        assert det(U) in (1, -1) and det(V) in (1, -1)
        diag = [D[i][i] for i in range(min(m, n))]
        # off-diagonal zero, nonnegative diagonal, divisibility chain
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            assert a >= 0
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0


def test_smith_known_invariants():
    D, _, _ = smith([[2, 0], [0, 4]])
    assert [D[0][0], D[1][1]] == [2, 4]
    D, _, _ = smith([[2, 1], [0, 2]])
    assert [D[0][0], D[1][1]] == [1, 4]


def test_primitive():
    assert primitive((13, -2))
    assert primitive((3, -2))
    assert not primitive((4, 26))
    with pytest.raises(GradedError):
        primitive((0, 0))


def test_solve_row_combination():
    rng = random.Random(12)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        M = random_matrix(rng, m, n, -5, 5)
        x = [rng.randint(-4, 4) for _ in range(m)]
        target = [sum(x[i] * M[i][j] for i in range(m)) for j in range(n)]
        y = solve_row_combination(M, target)
        assert y is not None
        assert [sum(y[i] * M[i][j] for i in range(m)) for j in range(n)] == target
    assert solve_row_combination([[2, 0]], [1, 0]) is None
    assert solve_row_combination([], [0, 0]) == []
    assert solve_row_combination([], [1]) is None


@pytest.fixture
def table():
    return VarTable(
        [("c1", 1), ("c2", 2), ("c3", 3), ("c4", 4), ("x", 2)], degree_bound=8
    )


@pytest.fixture
def so4_ideal(table):
    c1 = table.var("c1")
    c3 = table.var("c3")
    c4 = table.var("c4")
    x = table.var("x")
    return GradedIdeal([c1, 2 * c3, x * c3, x * x - 4 * c4])


def test_ideal_validation(table):
    with pytest.raises(GradedError):
        GradedIdeal([table.zero()])
    with pytest.raises(GradedError):
        GradedIdeal([table.var("c1") + table.var("c2")])  # not homogeneous


def test_membership_with_certificate(so4_ideal, table):
    rng = random.Random(31)
    gens = so4_ideal.generators
    for _ in range(20):
        # random homogeneous combination of the generators
        d = rng.randint(2, 8)
        p = table.zero()
        for g in gens:
            rem = d - g.degree()
            if rem < 0:
                continue
            mono = rng.choice(table.monomials(rem))
            p = p + rng.randint(-3, 3) * g * table.poly({mono: 1})
        if p.is_zero():
            continue
        ok, cert = so4_ideal.member(p)
        assert ok
        assert so4_ideal.certificate_product(cert) == p


def test_membership_negative(so4_ideal, table):
    ok, cert = so4_ideal.member(table.var("c3"))
    assert not ok and cert is None
    ok, _ = so4_ideal.member(table.var("c2"))
    assert not ok
    # torsion: 2*c3 is in, c3 is not
    ok, cert = so4_ideal.member(2 * table.var("c3"))
    assert ok
    assert so4_ideal.certificate_product(cert) == 2 * table.var("c3")


def test_membership_requires_homogeneous(so4_ideal, table):
    with pytest.raises(GradedError):
        so4_ideal.member(table.var("c1") + table.var("c2"))
    ok, cert = so4_ideal.member(table.zero())
    assert ok and cert == []


def test_normal_form_idempotent(so4_ideal, table):
    rng = random.Random(6)
    for _ in range(20):
        d = rng.randint(1, 8)
        mono = rng.choice(table.monomials(d))
        p = table.poly({mono: rng.randint(-5, 5)})
        nf = so4_ideal.normal_form(p)
        assert so4_ideal.normal_form(nf) == nf
        ok, _ = so4_ideal.member(p - nf)
        assert ok


def test_quotient_structure_so4(so4_ideal):
    # Z[c1..c4,x]/(c1, 2c3, x*c3, x^2-4c4) degree by degree
    want = {0: "Z", 1: "0", 2: "Z^2", 3: "Z/2", 4: "Z^3", 5: "Z/2",
            6: "Z^4 + Z/2"}
    for d, s in want.items():
        assert str(so4_ideal.quotient_structure(d)) == s


def test_quotient_structure_simple():
    t = VarTable([("u", 1)], 5)
    ideal = GradedIdeal([2 * t.var("u")])
    assert str(ideal.quotient_structure(1)) == "Z/2"
    assert str(ideal.quotient_structure(3)) == "Z/2"
    ideal2 = GradedIdeal([t.var("u") ** 2])
    assert str(ideal2.quotient_structure(1)) == "Z"
    assert str(ideal2.quotient_structure(2)) == "0"


def test_contains_and_equal(table):
    c1, c2 = table.var("c1"), table.var("c2")
    big = GradedIdeal([c1, c2])
    small = GradedIdeal([c1, c1 * c2, 2 * c2])
    ok, w = big.contains(small, 6)
    assert ok and w is None
    ok, w = small.contains(big, 6)
    assert not ok and w == c2
    ok, _ = big.equal(GradedIdeal([c1 + 0 * c2, c2]), 6)
    assert ok
    ok, why = big.equal(small, 6)
    assert not ok


def test_equal_detects_span_difference(table):
    c1 = table.var("c1")
    a = GradedIdeal([c1])
    b = GradedIdeal([2 * c1])
    ok, _ = a.equal(b, 4)
    assert not ok
