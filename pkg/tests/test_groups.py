import math
from fractions import Fraction
from functools import reduce

import pytest

from gfano.groups import (
    ASSERTED,
    COMPUTED,
    CyclotomicProfile,
    admissible_orders,
    corollary_orders,
    cyclotomic,
    divisors,
    euler_phi,
    fixed_point_free_profiles,
    minimal_subgroup_orders,
    minkowski_bound,
    poly_divmod,
    poly_eval,
    poly_mul,
    profile_order,
)
from gfano.lattice import determinant


def mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def cyclotomic_at(k, t):
    """phi_k(t) as prod over d | k of (t^d - 1)^mu(k/d)."""
    v = Fraction(1)
    for d in divisors(k):
        v *= Fraction(t**d - 1) ** mobius(k // d)
    return v


def minkowski_formula(N):
    primes = [p for p in range(2, N + 2) if all(p % q for q in range(2, p))]
    out = 1
    for p in primes:
        e, q = 0, p - 1
        while q <= N:
            e += N // q
            q *= p
        out *= p**e
    return out


def companion(poly):
    n = len(poly) - 1
    M = [[0] * n for _ in range(n)]
    for i in range(1, n):
        M[i][i - 1] = 1
    for i in range(n):
        M[i][n - 1] = -poly[i]
    return M


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def fixed_point_free(M, j):
    n = len(M)
    P = reduce(matmul, [M] * j) if j else [[int(r == c) for c in range(n)] for r in range(n)]
    return determinant([[P[r][c] - (r == c) for c in range(n)] for r in range(n)]) != 0


@pytest.mark.parametrize("k", range(1, 61))
def test_cyclotomic_product_identity(k):
    prod = reduce(poly_mul, (cyclotomic(d) for d in divisors(k)), (1,))
    assert prod == (-1,) + (0,) * (k - 1) + (1,)


@pytest.mark.parametrize("k", [1, 2, 3, 6, 12, 15, 30, 36, 60])
def test_cyclotomic_matches_mobius_oracle(k):
    for t in (2, 3, -2, 5):
        assert poly_eval(cyclotomic(k), t) == cyclotomic_at(k, t)


def test_small_cyclotomics():
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(4) == (1, 0, 1)
    assert cyclotomic(6) == (1, -1, 1)
    assert [euler_phi(k) for k in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    with pytest.raises(ValueError):
        cyclotomic(61)


def test_poly_divmod():
    q, r = poly_divmod((1, 0, 0, 1), (1, 1))
    assert (q, r) == ((1, -1, 1), ())
    with pytest.raises(ValueError):
        poly_divmod((1, 1), (1, 2))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_minkowski(N):
    assert minkowski_bound(N) == minkowski_formula(N)


def test_minkowski_quoted_values():
    assert minkowski_bound(3) == 48
    assert minkowski_bound(4) == 5760
    with pytest.raises(ValueError):
        minkowski_bound(5)


def test_profiles():
    assert [p.indices for p in fixed_point_free_profiles(1)] == [(2,)]
    p2 = {p.indices for p in fixed_point_free_profiles(2)}
    assert p2 == {(2,), (3,), (4,), (6,)}
    # every 3x3 profile carries phi_2
    assert all(2 in p.indices for p in fixed_point_free_profiles(3))
    assert all(p.degree <= 4 for p in fixed_point_free_profiles(4))
    with pytest.raises(ValueError):
        CyclotomicProfile((2, 2))
    with pytest.raises(ValueError):
        CyclotomicProfile((1,))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_minimal_orders_against_companion_matrices(N):
    for p in fixed_point_free_profiles(N):
        M = companion(p.polynomial())
        n = math.lcm(*p.indices)
        ffp = {n // d for d in divisors(n) if fixed_point_free(M, d)}
        minimal = {m for m in ffp if not any(m2 < m and m % m2 == 0 for m2 in ffp)}
        assert minimal_subgroup_orders(p) == minimal


def test_admissible_orders():
    assert admissible_orders(1).values() == [2]
    assert admissible_orders(2).values() == [2, 3]
    assert admissible_orders(3).values() == [2, 4, 6]
    div384 = {d for d in divisors(384) if d > 1}
    assert set(admissible_orders(4).values()) == {5, 9} | div384
    for N in (1, 2, 3):
        os_ = admissible_orders(N)
        assert set(os_.members.values()) == {COMPUTED}
        assert not os_.divisor_clauses
    os4 = admissible_orders(4)
    assert os4.provenance(5) == COMPUTED
    assert os4.provenance(9) == ASSERTED
    assert os4.provenance(128) == ASSERTED
    assert 7 not in os4 and 10 not in os4 and 384 in os4
    with pytest.raises(ValueError):
        admissible_orders(5)


def test_corollary_orders_and_orbits():
    assert corollary_orders(2).values() == [2]
    assert corollary_orders(3).values() == [2, 3]
    assert corollary_orders(4).values() == [2, 4, 6]
    assert corollary_orders(4).orbit_lengths() == [2, 3, 4, 6]
    d = corollary_orders(5).to_dict()
    assert d["rank"] == 4 and 9 in d["values"]


def test_profile_shapes():
    assert {p.indices for p in fixed_point_free_profiles(3)} == {(2,), (2, 3), (2, 4), (2, 6)}
    unfiltered = {p.indices for p in fixed_point_free_profiles(3, orthogonal_filter=False)}
    assert {(3,), (4,), (6,)} <= unfiltered
    p4 = {p.indices for p in fixed_point_free_profiles(4)}
    assert {(5,), (8,), (10,), (12,)} <= p4
    rest = p4 - {(5,), (8,), (10,), (12,)}
    assert all(set(p) <= {2, 3, 4, 6} for p in rest)
    assert cyclotomic(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_profile_orders_divide_minkowski(N):
    for p in fixed_point_free_profiles(N):
        assert minkowski_bound(N) % profile_order(p) == 0
        assert 1 not in p.indices
