"""Picard lattices with a cubic intersection form, and their isometries.

Effectivity of divisor classes is not modelled: the isometry group found here
can be larger than what automorphisms of the variety induce. That is harmless
for the classifier, which only asks whether *some* subgroup has a rank-1
invariant lattice.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .intring import (
    DivisorClass,
    RingSpec,
    ci_anticanonical,
    top_intersection,
)

DEFAULT_ENTRY_BOUND = 3
DEFAULT_NODE_BUDGET = 2_000_000

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


class NotAGroupError(RuntimeError):
    """The isometries found are not closed; the entry bound is too small."""


class SearchBudgetExceeded(RuntimeError):
    pass


def _triples(rho: int):
    return itertools.combinations_with_replacement(range(rho), 3)


@dataclass(frozen=True)
class TrilinearForm:
    rank: int
    values: tuple[tuple[tuple[int, int, int], int], ...]

    def __init__(self, rank: int, values):
        if not 1 <= rank <= 6:
            raise ValueError(f"rank must be in 1..6, got {rank}")
        table = {}
        for key, v in dict(values).items():
            key = tuple(sorted(int(i) for i in key))
            if len(key) != 3 or not all(0 <= i < rank for i in key):
                raise ValueError(f"bad index triple {key} for rank {rank}")
            if key in table and table[key] != v:
                raise ValueError(f"inconsistent values for {key}")
            table[key] = int(v)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self, "values", tuple((t, table.get(t, 0)) for t in _triples(rank))
        )

    @classmethod
    def from_list(cls, rank: int, cubic: Sequence[int]) -> "TrilinearForm":
        """Values on sorted triples (i <= j <= k) in lexicographic order.

        For rank 2 that is (M1^3, M1^2 M2, M1 M2^2, M2^3).
        """
        keys = list(_triples(rank))
        if len(cubic) != len(keys):
            raise ValueError(f"rank {rank} needs {len(keys)} values, got {len(cubic)}")
        return cls(rank, dict(zip(keys, cubic)))

    def as_list(self) -> list[int]:
        return [v for _, v in self.values]

    def __getitem__(self, ijk) -> int:
        return dict(self.values)[tuple(sorted(ijk))]

    def tensor(self) -> list[list[list[int]]]:
        table = dict(self.values)
        r = range(self.rank)
        return [[[table[tuple(sorted((i, j, k)))] for k in r] for j in r] for i in r]


@dataclass(frozen=True)
class PicardLattice:
    form: TrilinearForm
    c1: Vector
    label: str = ""

    def __init__(self, form: TrilinearForm, c1: Sequence[int], label: str = "", check: bool = True):
        c1 = tuple(int(x) for x in c1)
        if len(c1) != form.rank:
            raise ValueError(f"c1 has length {len(c1)}, lattice rank is {form.rank}")
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_T", form.tensor())
        if check:
            d = self.degree
            if d <= 0 or d % 2:
                raise ValueError(f"c1^3 = {d} must be positive and even")

    @property
    def rank(self) -> int:
        return self.form.rank

    @property
    def degree(self) -> int:
        return self.eval(self.c1, self.c1, self.c1)

    def eval(self, u: Sequence[int], v: Sequence[int], w: Sequence[int]) -> int:
        return trilinear_eval(self, u, v, w)

    def basis(self, i: int) -> Vector:
        return tuple(int(j == i) for j in range(self.rank))


def trilinear_eval(L: PicardLattice, u: Sequence[int], v: Sequence[int], w: Sequence[int]) -> int:
    rho = L.rank
    for name, x in (("u", u), ("v", v), ("w", w)):
        if len(x) != rho:
            raise ValueError(f"{name} has length {len(x)}, lattice rank is {rho}")
    T = L._T
    total = 0
    for i in range(rho):
        if not u[i]:
            continue
        for j in range(rho):
            if not v[j]:
                continue
            Tij = T[i][j]
            s = 0
            for k in range(rho):
                s += Tij[k] * w[k]
            total += u[i] * v[j] * s
    return total


def lattice_from_ci(
    spec: RingSpec,
    hyps: Sequence[DivisorClass],
    basis: Sequence[DivisorClass] | None = None,
    label: str = "",
) -> PicardLattice:
    """Restrict ambient divisor classes to a complete intersection of dimension 3."""
    if basis is None:
        basis = [spec.divisor([int(i == j) for j in range(spec.k)]) for i in range(spec.k)]
    values = {}
    for t in _triples(len(basis)):
        values[t] = top_intersection([basis[t[0]], basis[t[1]], basis[t[2]], *hyps])
    c1 = _coordinates(ci_anticanonical(spec, hyps), basis)
    return PicardLattice(TrilinearForm(len(basis), values), c1, label)


def lattice_from_cover(
    spec: RingSpec,
    branch: DivisorClass,
    basis: Sequence[DivisorClass] | None = None,
    label: str = "",
) -> PicardLattice:
    """Pullbacks along a double cover of a threefold ambient; every triple product doubles."""
    if spec.dim != 3:
        raise ValueError("double cover model needs a 3-dimensional ambient")
    if any(d % 2 for d in branch.multidegree):
        raise ValueError(f"branch multidegree {branch.multidegree} is not divisible by 2")
    if basis is None:
        basis = [spec.divisor([int(i == j) for j in range(spec.k)]) for i in range(spec.k)]
    values = {
        t: 2 * top_intersection([basis[t[0]], basis[t[1]], basis[t[2]]])
        for t in _triples(len(basis))
    }
    mk = spec.divisor([n + 1 - d // 2 for n, d in zip(spec.dims, branch.multidegree)])
    return PicardLattice(TrilinearForm(len(basis), values), _coordinates(mk, basis), label)


def _coordinates(cls: DivisorClass, basis: Sequence[DivisorClass]) -> Vector:
    cols = [list(b.multidegree) for b in basis]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(cls.spec.k)]
    sol = solve_rational(rows, list(cls.multidegree))
    if sol is None or any(x.denominator != 1 for x in sol):
        raise ValueError(f"class {cls.multidegree} is not an integer combination of the basis")
    return tuple(int(x) for x in sol)


# --- exact linear algebra -------------------------------------------------

def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for i in range(r + 1, len(M)):
            for j in range(c + 1, ncols):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == len(M):
            break
    return r


def determinant(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for c in range(n - 1):
        pivot = next((i for i in range(c, n) if A[i][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                A[i][j] = (A[i][j] * A[c][c] - A[i][c] * A[c][j]) // prev
        prev = A[c][c]
    return sign * A[n - 1][n - 1]


def solve_rational(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """One solution of A x = b over Q (free variables set to 0), or None."""
    m, n = len(A), len(A[0]) if A else 0
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x


# --- isometries -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class LatticeIsometry:
    """Integer matrix acting on column vectors; column i is the image of basis vector i."""

    matrix: Matrix

    def __init__(self, matrix: Iterable[Iterable[int]]):
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        if not m or any(len(row) != len(m) for row in m):
            raise ValueError("isometry matrix must be square")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int) -> "LatticeIsometry":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "LatticeIsometry":
        n = len(cols)
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "LatticeIsometry":
        """Sends basis vector i to basis vector perm[i]."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError(f"{list(perm)} is not a permutation")
        return cls.from_columns([[int(perm[i] == j) for j in range(n)] for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.matrix)

    def column(self, i: int) -> Vector:
        return tuple(row[i] for row in self.matrix)

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.matrix)

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        n = self.size
        B = other.matrix
        return LatticeIsometry(
            [[sum(self.matrix[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )

    def determinant(self) -> int:
        return determinant(self.matrix)

    def is_identity(self) -> bool:
        return self == LatticeIsometry.identity(self.size)

    def minus_identity(self) -> list[list[int]]:
        return [[x - int(i == j) for j, x in enumerate(row)] for i, row in enumerate(self.matrix)]

    def preserves(self, L: PicardLattice) -> bool:
        cols = [self.column(i) for i in range(self.size)]
        for i, j, k in _triples(L.rank):
            if L.eval(cols[i], cols[j], cols[k]) != L.form[(i, j, k)]:
                return False
        return True

    def check(self, L: PicardLattice) -> list[str]:
        """Names of the violated isometry conditions (empty if none)."""
        bad = []
        if self.size != L.rank:
            return ["dimension"]
        if self.determinant() not in (1, -1):
            bad.append("determinant")
        if not self.preserves(L):
            bad.append("form")
        if self.apply(L.c1) != L.c1:
            bad.append("c1")
        return bad

    def __repr__(self):
        return "LatticeIsometry(" + ";".join(",".join(map(str, r)) for r in self.matrix) + ")"


def _candidates(L: PicardLattice, i: int, bound: int) -> list[Vector]:
    c1 = L.c1
    b = L.basis(i)
    cube = L.form[(i, i, i)]
    lin = L.eval(c1, c1, b)
    quad = L.eval(c1, b, b)
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=L.rank):
        if L.eval(c1, c1, v) != lin:
            continue
        if L.eval(c1, v, v) != quad:
            continue
        if L.eval(v, v, v) != cube:
            continue
        out.append(v)
    return out


def isometries_fixing_c1(
    L: PicardLattice,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[LatticeIsometry]:
    """All integer isometries with entries in [-bound, bound] fixing c1.

    Columns are assigned one at a time from per-column candidate lists (the
    candidates already match cubes and the pairings with c1); each new column
    must satisfy every mixed triple with the columns chosen so far.
    Raises NotAGroupError if the result is not closed under composition
    and inverses, which means the bound cut off part of the group.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be positive")
    rho = L.rank
    cands = [_candidates(L, i, entry_bound) for i in range(rho)]
    found: list[LatticeIsometry] = []
    nodes = 0
    cols: list[Vector] = []

    def consistent(new: int) -> bool:
        v = cols[new]
        for a in range(new + 1):
            for b in range(a, new + 1):
                if L.eval(cols[a], cols[b], v) != L.form[(a, b, new)]:
                    return False
        return True

    def descend(i: int) -> None:
        nonlocal nodes
        if i == rho:
            g = LatticeIsometry.from_columns(cols)
            if g.apply(L.c1) == L.c1 and g.determinant() in (1, -1):
                found.append(g)
            return
        for v in cands[i]:
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"more than {node_budget} search nodes")
            cols.append(v)
            if consistent(i):
                descend(i + 1)
            cols.pop()

    descend(0)
    found.sort()
    for g in found:
        bad = g.check(L)
        if bad:
            raise AssertionError(f"search produced a non-isometry {g}: {bad}")
    _assert_group(found, rho)
    return found


def _assert_group(elements: Sequence[LatticeIsometry], n: int) -> None:
    members = set(elements)
    ident = LatticeIsometry.identity(n)
    if ident not in members:
        raise NotAGroupError("identity missing")
    for g in elements:
        if not any((g @ h).is_identity() for h in elements):
            raise NotAGroupError(f"{g} has no inverse within the entry bound")
        for h in elements:
            if g @ h not in members:
                raise NotAGroupError(f"product of {g} and {h} falls outside the entry bound")


def generate_group(gens: Sequence[LatticeIsometry]) -> list[LatticeIsometry]:
    """Closure of ``gens`` under multiplication (finite groups only)."""
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].size
    ident = LatticeIsometry.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        if len(seen) > 100_000:
            raise ValueError("generated group is too large (infinite order element?)")
    return sorted(seen)


def invariant_rank(L: PicardLattice, gens: Sequence[LatticeIsometry]) -> int:
    """Rank of the sublattice fixed by every generator."""
    rho = L.rank
    rows: list[list[int]] = []
    for g in gens:
        if g.size != rho:
            raise ValueError(f"generator is {g.size}x{g.size}, lattice rank is {rho}")
        rows.extend(g.minus_identity())
    return rho - rank(rows) if rows else rho


@dataclass(frozen=True)
class Witness:
    order: int
    generators: tuple[LatticeIsometry, ...]
    elements: tuple[LatticeIsometry, ...]


def all_subgroups(group: Sequence[LatticeIsometry]) -> list[tuple[LatticeIsometry, ...]]:
    """Every subgroup, built from cyclic subgroups by repeated joins."""
    subgroups = {frozenset(generate_group([g])) for g in group}
    cyclic = list(subgroups)
    frontier = list(subgroups)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = frozenset(generate_group(sorted(H | C)))
                if J not in subgroups:
                    subgroups.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted((tuple(sorted(H)) for H in subgroups), key=lambda H: (len(H), H))


def _small_generating_set(H: Sequence[LatticeIsometry]) -> tuple[LatticeIsometry, ...]:
    target = set(H)
    gens: list[LatticeIsometry] = []
    span = {LatticeIsometry.identity(H[0].size)}
    for g in H:
        if g in span:
            continue
        gens.append(g)
        span = set(generate_group(gens))
        if span == target:
            break
    return tuple(gens)


def minimal_witness(
    L: PicardLattice,
    group: Sequence[LatticeIsometry] | None = None,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
) -> Witness | None:
    """Smallest subgroup whose invariant sublattice has rank 1, or None."""
    if group is None:
        group = isometries_fixing_c1(L, entry_bound)
    if invariant_rank(L, group) != 1:
        return None
    for H in all_subgroups(group):
        if invariant_rank(L, H) == 1:
            return Witness(len(H), _small_generating_set(H), H)
    return None  # pragma: no cover - the full group is itself a subgroup


def named_isometry(name: str, rho: int) -> LatticeIsometry:
    """Parse a generator spec: identity, swap, cycleK, perm=a,b,..., or a matrix a,b;c,d."""
    name = name.strip()
    if name in ("id", "identity"):
        return LatticeIsometry.identity(rho)
    if name == "swap":
        if rho < 2:
            raise ValueError("swap needs rank >= 2")
        return LatticeIsometry.permutation([1, 0] + list(range(2, rho)))
    if name.startswith("cycle"):
        k = int(name[5:] or rho)
        if not 2 <= k <= rho:
            raise ValueError(f"cycle length {k} out of range for rank {rho}")
        return LatticeIsometry.permutation([(i + 1) % k for i in range(k)] + list(range(k, rho)))
    if name.startswith("perm="):
        return LatticeIsometry.permutation([int(x) for x in name[5:].split(",")])
    rows = [[int(x) for x in r.split(",")] for r in name.split(";")]
    if len(rows) != rho:
        raise ValueError(f"matrix has {len(rows)} rows, lattice rank is {rho}")
    return LatticeIsometry(rows)
