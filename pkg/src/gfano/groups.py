"""Cyclotomic polynomials and orders of fixed-point-free finite groups in GL_N(Q).

Polynomials are tuples of integer coefficients, lowest degree first.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

COMPUTED = "computed"
ASSERTED = "asserted-from-paper"

MAX_CYCLOTOMIC_INDEX = 60

IntPolynomial = tuple[int, ...]


def poly_normalize(p: Iterable[int]) -> IntPolynomial:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> IntPolynomial:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_normalize(out)


def poly_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[IntPolynomial, IntPolynomial]:
    """Division by a monic (or unit-leading) integer polynomial."""
    b = poly_normalize(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = b[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must have leading coefficient +-1")
    rem = list(poly_normalize(a))
    if len(rem) < len(b):
        return (), tuple(rem)
    quot = [0] * (len(rem) - len(b) + 1)
    for shift in range(len(rem) - len(b), -1, -1):
        c = rem[shift + len(b) - 1] * lead
        quot[shift] = c
        if c:
            for j, y in enumerate(b):
                rem[shift + j] -= c * y
    return poly_normalize(quot), poly_normalize(rem)


def poly_eval(p: Sequence[int], t: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """k-th cyclotomic polynomial, by exact division of t^k - 1 by lower ones."""
    if not 1 <= k <= MAX_CYCLOTOMIC_INDEX:
        raise ValueError(f"cyclotomic index must be in [1, {MAX_CYCLOTOMIC_INDEX}], got {k}")
    num: IntPolynomial = (-1,) + (0,) * (k - 1) + (1,)
    for d in divisors(k)[:-1]:
        num, rem = poly_divmod(num, cyclotomic(d))
        assert not rem, f"phi_{d} does not divide t^{k}-1"
    return num


def euler_phi(k: int) -> int:
    return len(cyclotomic(k)) - 1


@dataclass(frozen=True)
class CyclotomicProfile:
    """Minimal polynomial prod(phi_k) of a fixed-point-free element."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"profile indices must be distinct: {idx}")
        if any(k < 2 for k in idx):
            raise ValueError(f"profile indices must be >= 2: {idx}")
        object.__setattr__(self, "indices", idx)

    @property
    def degree(self) -> int:
        return sum(euler_phi(k) for k in self.indices)

    def polynomial(self) -> IntPolynomial:
        return reduce(poly_mul, (cyclotomic(k) for k in self.indices), (1,))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def fixed_point_free_profiles(N: int, orthogonal_filter: bool | None = None) -> list[CyclotomicProfile]:
    """Squarefree products of phi_k (k >= 2) of degree <= N.

    phi_1 is excluded because a fixed-point-free element has mu(1) != 0.
    With ``orthogonal_filter`` (default: only for N = 3) profiles must
    contain phi_2: an orthogonal 3x3 matrix always has eigenvalue +1 or -1.
    """
    if not 1 <= N <= 4:
        raise ValueError(f"rank must be in 1..4, got {N}")
    if orthogonal_filter is None:
        orthogonal_filter = N == 3
    ks = [k for k in range(2, MAX_CYCLOTOMIC_INDEX + 1) if euler_phi(k) <= N]
    out = []
    for r in range(1, N + 1):
        for combo in itertools.combinations(ks, r):
            if sum(euler_phi(k) for k in combo) > N:
                continue
            if orthogonal_filter and 2 not in combo:
                continue
            out.append(CyclotomicProfile(combo))
    out.sort(key=lambda p: (p.degree, p.indices))
    return out


def profile_order(p: CyclotomicProfile | Sequence[int]) -> int:
    idx = tuple(p)
    if not idx:
        raise ValueError("empty profile has no order")
    return math.lcm(*idx)


def power_profile(p: CyclotomicProfile | Sequence[int], d: int) -> tuple[int, ...] | None:
    """Profile of tau^d, or None when tau^d has a fixed vector.

    A primitive k-th root of unity raised to d is a primitive k/gcd(k, d)-th
    root; it becomes 1 exactly when k divides d.
    """
    out = set()
    for k in p:
        kk = k // math.gcd(k, d)
        if kk == 1:
            return None
        out.add(kk)
    return tuple(sorted(out))


def minimal_subgroup_orders(p: CyclotomicProfile | Sequence[int]) -> set[int]:
    """Orders of the minimal fixed-point-free subgroups of <tau>."""
    n = profile_order(p)
    ffp = [n // d for d in divisors(n) if power_profile(p, d) is not None]
    return {m for m in ffp if not any(m2 < m and m % m2 == 0 for m2 in ffp)}


_MINKOWSKI = {1: 2, 2: 24, 3: 48, 4: 5760}


def minkowski_bound(N: int) -> int:
    """Least common multiple of orders of finite subgroups of GL_N(Q)."""
    try:
        return _MINKOWSKI[N]
    except KeyError:
        raise ValueError(f"rank must be in 1..4, got {N}") from None


@dataclass
class OrderSet:
    """Admissible orders of a subgroup G_0 with V^{G_0} = 0.

    ``members`` maps explicit orders to a provenance flag; each clause
    ``(M, flag)`` additionally admits every divisor >= 2 of M.
    """

    rank: int
    members: dict[int, str] = field(default_factory=dict)
    divisor_clauses: list[tuple[int, str]] = field(default_factory=list)

    def __contains__(self, n: int) -> bool:
        if n in self.members:
            return True
        return n >= 2 and any(M % n == 0 for M, _ in self.divisor_clauses)

    def values(self) -> list[int]:
        vals = set(self.members)
        for M, _ in self.divisor_clauses:
            vals.update(d for d in divisors(M) if d >= 2)
        return sorted(vals)

    def provenance(self, n: int) -> str | None:
        if n in self.members:
            return self.members[n]
        for M, flag in self.divisor_clauses:
            if n >= 2 and M % n == 0:
                return flag
        return None

    def orbit_lengths(self) -> list[int]:
        """Every n > 1 dividing some admissible order."""
        return sorted({d for g in self.values() for d in divisors(g) if d > 1})

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "members": [{"order": n, "provenance": f} for n, f in sorted(self.members.items())],
            "divisorClauses": [{"divides": M, "provenance": f} for M, f in self.divisor_clauses],
            "values": self.values(),
        }


# Non-cyclic cases from the lemma's proof, not derived here.
_ASSERTED_ORDERS = {4: [9]}
_ASSERTED_CLAUSES = {4: [3 * 2**7]}


def admissible_orders(N: int) -> OrderSet:
    if not 1 <= N <= 4:
        raise ValueError(f"rank must be in 1..4, got {N}")
    result = OrderSet(N)
    for p in fixed_point_free_profiles(N):
        for m in minimal_subgroup_orders(p):
            result.members[m] = COMPUTED
    for m in _ASSERTED_ORDERS.get(N, []):
        result.members.setdefault(m, ASSERTED)
    for M in _ASSERTED_CLAUSES.get(N, []):
        result.divisor_clauses.append((M, ASSERTED))
    return result


def corollary_orders(rho: int) -> OrderSet:
    """Orders N with a subgroup G_0 of order N and rank-1 invariant Picard group."""
    return admissible_orders(rho - 1)
