"""Exact intersection numbers on products of projective spaces.

The cohomology ring of P^{n_1} x ... x P^{n_k} is Z[h_1, ..., h_k] / (h_i^{n_i+1}).
Elements are stored sparsely as ``{exponent tuple: int}``; anything past a
nilpotency bound is dropped as soon as it is produced.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class SpecMismatchError(ValueError):
    """Operands live in different ambient rings."""


class DegreeMismatchError(ValueError):
    """A product that should be top-degree is not."""


@dataclass(frozen=True)
class RingSpec:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(n) for n in dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def top(self) -> tuple[int, ...]:
        return self.dims

    def anticanonical(self) -> "DivisorClass":
        return DivisorClass(self, tuple(n + 1 for n in self.dims))

    def one(self) -> "RingElement":
        return RingElement(self, {(0,) * self.k: 1})

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def h(self, i: int) -> "RingElement":
        """Hyperplane class pulled back from the i-th factor (0-based)."""
        exp = [0] * self.k
        exp[i] = 1
        return RingElement(self, {tuple(exp): 1})

    def divisor(self, multidegree: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self, tuple(multidegree))

    def __str__(self) -> str:
        return "x".join(f"P{n}" for n in self.dims)


def _admissible(spec: RingSpec, exp: tuple[int, ...]) -> bool:
    return all(e <= n for e, n in zip(exp, spec.dims))


@dataclass(frozen=True, eq=False)
class RingElement:
    spec: RingSpec
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.spec.k or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {self.spec}")
            if c and _admissible(self.spec, exp):
                clean[exp] = clean.get(exp, 0) + int(c)
        clean = {e: c for e, c in clean.items() if c}
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.spec == other.spec and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def degree(self) -> int | None:
        """Total degree if homogeneous and nonzero, else None."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def coefficient(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.spec, {(0,) * self.spec.k: other})
        if isinstance(other, DivisorClass):
            other = other.element()
        if not isinstance(other, RingElement):
            raise TypeError(f"cannot combine RingElement with {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatchError(f"{self.spec} vs {other.spec}")
        return other

    def __add__(self, other):
        return ring_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return ring_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return ring_add(self._coerce(other), -self)

    def __mul__(self, other):
        return ring_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                f"h{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class DivisorClass:
    spec: RingSpec
    multidegree: tuple[int, ...]

    def __post_init__(self):
        md = tuple(int(d) for d in self.multidegree)
        if len(md) != self.spec.k:
            raise SpecMismatchError(
                f"multidegree {md} has {len(md)} entries, ambient {self.spec} has {self.spec.k} factors"
            )
        object.__setattr__(self, "multidegree", md)

    def element(self) -> RingElement:
        terms = {}
        for i, d in enumerate(self.multidegree):
            exp = [0] * self.spec.k
            exp[i] = 1
            terms[tuple(exp)] = d
        return RingElement(self.spec, terms)


def _as_element(x) -> RingElement:
    return x.element() if isinstance(x, DivisorClass) else x


def _same_spec(a: RingElement, b: RingElement) -> None:
    if a.spec != b.spec:
        raise SpecMismatchError(f"{a.spec} vs {b.spec}")


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _same_spec(a, b)
    terms = dict(a.terms)
    for exp, c in b.terms.items():
        terms[exp] = terms.get(exp, 0) + c
    return RingElement(a.spec, terms)


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _same_spec(a, b)
    dims = a.spec.dims
    terms: dict[tuple[int, ...], int] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            # eager truncation keeps at most prod(n_i + 1) terms alive
            if any(e > n for e, n in zip(exp, dims)):
                continue
            terms[exp] = terms.get(exp, 0) + ca * cb
    return RingElement(a.spec, terms)


def top_intersection(factors: Sequence[RingElement | DivisorClass]) -> int:
    """Coefficient of h_1^{n_1} ... h_k^{n_k} in the product of ``factors``.

    Every factor must be homogeneous and the degrees must add up to the
    ambient dimension. A zero factor gives 0 as long as the remaining
    degrees do not already overshoot.
    """
    if not factors:
        raise DegreeMismatchError("empty product")
    elems = [_as_element(f) for f in factors]
    spec = elems[0].spec
    total = 0
    has_zero = False
    for e in elems:
        if e.spec != spec:
            raise SpecMismatchError(f"{spec} vs {e.spec}")
        if e.is_zero():
            has_zero = True
            continue
        d = e.degree()
        if d is None:
            raise DegreeMismatchError(f"factor {e!r} is not homogeneous")
        total += d
    if has_zero and total <= spec.dim:
        return 0
    if total != spec.dim:
        raise DegreeMismatchError(f"product has degree {total}, top degree is {spec.dim}")
    prod = spec.one()
    for e in elems:
        prod = prod * e
    return prod.coefficient(spec.top)


def _check_hyps(spec: RingSpec, hyps: Sequence[DivisorClass]) -> None:
    for h in hyps:
        if h.spec != spec:
            raise SpecMismatchError(f"hypersurface in {h.spec}, ambient is {spec}")
    if len(hyps) >= spec.dim:
        raise DegreeMismatchError(
            f"{len(hyps)} hypersurfaces leave nothing of a {spec.dim}-dimensional ambient"
        )


def ci_anticanonical(spec: RingSpec, hyps: Sequence[DivisorClass]) -> DivisorClass:
    """Adjunction: -K of the complete intersection, as an ambient multidegree."""
    _check_hyps(spec, hyps)
    md = [n + 1 for n in spec.dims]
    for h in hyps:
        md = [m - d for m, d in zip(md, h.multidegree)]
    return DivisorClass(spec, tuple(md))


def ci_degree(spec: RingSpec, hyps: Sequence[DivisorClass], L: DivisorClass) -> int:
    """L^{dim X} on X = complete intersection of ``hyps``."""
    _check_hyps(spec, hyps)
    if L.spec != spec:
        raise SpecMismatchError(f"class in {L.spec}, ambient is {spec}")
    return top_intersection([L] * (spec.dim - len(hyps)) + list(hyps))


def double_cover_degree(spec: RingSpec, branch: DivisorClass) -> int:
    """(-K)^D of the double cover of the ambient branched along ``branch``."""
    if branch.spec != spec:
        raise SpecMismatchError(
            f"branch class lives in {branch.spec}, not in ambient {spec}"
        )
    if any(d % 2 for d in branch.multidegree):
        raise ValueError(f"branch multidegree {branch.multidegree} is not divisible by 2")
    pulled = DivisorClass(
        spec, tuple(n + 1 - d // 2 for n, d in zip(spec.dims, branch.multidegree))
    )
    return 2 * top_intersection([pulled] * spec.dim)


def blowup_curve_degree(minusK3_base: int, deg_mKC: int, genus: int) -> int:
    """-K^3 after blowing up a smooth curve C of genus g with -K_base . C = deg_mKC."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    return minusK3_base - 2 * deg_mKC - 2 + 2 * genus


def monomials(spec: RingSpec, degree: int) -> list[tuple[int, ...]]:
    """All admissible exponent tuples of the given total degree."""
    ranges = [range(n + 1) for n in spec.dims]
    return [e for e in itertools.product(*ranges) if sum(e) == degree]

