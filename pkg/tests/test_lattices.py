import random
from fractions import Fraction

import pytest

from heisquat.lattices import (IntLattice, RatLattice, adjugate, det_int, hnf,
                               hnf_in_span, kernel_basis, mat_frac_inverse,
                               solve_integer)


def test_hnf_identity():
    ident = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert hnf(ident) == ident


def test_hnf_hand_example():
    # {(2,0),(1,1)} spans the same lattice as {(1,1),(0,2)}
    assert hnf([(2, 0), (1, 1)]) == [[1, 1], [0, 2]]


def test_hnf_duplicates_collapse():
    rows = [(2, 1, 0), (4, 0, 1)]
    assert hnf(list(rows) + list(rows)) == hnf(rows)


def test_hnf_zero_rows():
    assert hnf([(0, 0), (0, 0)]) == []
    assert hnf([]) == []


def test_hnf_canonical_under_row_operations():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 4)
        m = rng.randint(1, 5)
        rows = [[rng.randint(-7, 7) for _ in range(n)] for _ in range(m)]
        h1 = hnf(rows)
        mixed = [r[:] for r in rows]
        for _ in range(8):
            a, b = rng.randrange(m), rng.randrange(m)
            if a != b:
                q = rng.randint(-3, 3)
                mixed[a] = [x + q * y for x, y in zip(mixed[a], mixed[b])]
            rng.shuffle(mixed)
        assert hnf(mixed) == h1
        assert hnf(h1) == h1  # idempotent
        for r in rows:
            assert hnf_in_span(h1, r)  # span-preserving


def test_hnf_reduced_above_pivots():
    rng = random.Random(1)
    for _ in range(100):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        h = hnf(rows)
        for i, row in enumerate(h):
            c = next(t for t in range(4) if row[t])
            assert row[c] > 0
            for above in h[:i]:
                assert 0 <= above[c] < row[c]


def test_kernel_basis():
    ker = kernel_basis([[2], [4], [0], [-2]])
    assert len(ker) == 3
    for row in ker:
        assert 2 * row[0] + 4 * row[1] + 0 * row[2] - 2 * row[3] == 0


def test_solve_integer():
    mat = [[2], [3]]
    x = solve_integer(mat, [1])
    assert x is not None and 2 * x[0] + 3 * x[1] == 1
    assert solve_integer([[2], [4]], [3]) is None


def test_det_and_adjugate():
    rng = random.Random(2)
    for _ in range(50):
        m = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        d = det_int(m)
        adj = adjugate(m)
        prod = [[sum(m[r][t] * adj[t][c] for t in range(4)) for c in range(4)]
                for r in range(4)]
        assert prod == [[d if r == c else 0 for c in range(4)] for r in range(4)]


def test_frac_inverse():
    m = [[Fraction(1, 2), 1], [0, Fraction(3)]]
    inv = mat_frac_inverse(m)
    assert inv == [[Fraction(2), Fraction(-2, 3)], [0, Fraction(1, 3)]]
    with pytest.raises(ValueError):
        mat_frac_inverse([[1, 2], [2, 4]])


def test_int_lattice_membership():
    lat = IntLattice.from_rows([(2, 0), (0, 3)])
    assert lat.contains((4, 3))
    assert not lat.contains((1, 0))
    assert lat.rank == 2


def test_rat_lattice_roundtrips():
    rl = RatLattice.from_frac_rows([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
    assert rl.contains_frac([Fraction(5, 2), Fraction(2, 3)])
    assert not rl.contains_frac([Fraction(1, 4), 0])
    # dual of dual is the lattice itself
    assert rl.dual().dual() == rl


def test_rat_lattice_intersection():
    a = RatLattice.from_frac_rows([[Fraction(1, 2), 0], [0, 1]])
    b = RatLattice.from_frac_rows([[Fraction(1, 3), 0], [0, 1]])
    both = a.intersect(b)
    # (1/2)Z cap (1/3)Z = Z on the first axis
    assert both == RatLattice.from_frac_rows([[1, 0], [0, 1]])


def test_rat_lattice_intersection_randomised():
    rng = random.Random(3)
    for _ in range(40):
        rows_a = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
                  for _ in range(3)]
        rows_b = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
                  for _ in range(3)]
        try:
            a = RatLattice.from_frac_rows(rows_a)
            b = RatLattice.from_frac_rows(rows_b)
            if a.rank < 3 or b.rank < 3:
                continue
            inter = a.intersect(b)
        except ValueError:
            continue
        for r in inter.frac_rows():
            assert a.contains_frac(r) and b.contains_frac(r)
