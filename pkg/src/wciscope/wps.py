"""Weighted projective spaces P(a_0, ..., a_N) and their intrinsic invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .errors import NotWellFormedError, StructuralError
from .poly import count_monomials


def normalize_weights(weights: Sequence[int]) -> tuple[int, ...]:
    ws = []
    for a in weights:
        if isinstance(a, bool) or not isinstance(a, int):
            raise StructuralError(f"weights must be integers, got {a!r}")
        if a <= 0:
            raise StructuralError(f"weights must be positive, got {a}")
        ws.append(a)
    if not ws:
        raise StructuralError("at least one weight is required")
    return tuple(sorted(ws))


@dataclass(frozen=True)
class SingularStratum:
    """Coordinate stratum {x_i = 0 for i not in S} with gcd of its weights > 1."""

    indices: tuple[int, ...]
    gcd: int
    dim: int

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "gcd": self.gcd, "dim": self.dim}


@dataclass(frozen=True)
class WeightedProjectiveSpace:
    """P(a_0, ..., a_N); weights are stored sorted ascending."""

    weights: tuple[int, ...]
    groups: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", normalize_weights(self.weights))
        grouped: list[list[int]] = []
        for a in self.weights:
            if grouped and grouped[-1][0] == a:
                grouped[-1][1] += 1
            else:
                grouped.append([a, 1])
        object.__setattr__(self, "groups", tuple((a, r) for a, r in grouped))

    @classmethod
    def from_groups(cls, groups: Sequence[tuple[int, int]]) -> "WeightedProjectiveSpace":
        """Build from the abbreviated form ((a_0, r_0), ..., (a_M, r_M))."""
        ws: list[int] = []
        for a, r in groups:
            if r <= 0:
                raise StructuralError(f"multiplicity must be positive, got {r}")
            ws.extend([a] * r)
        return cls(tuple(ws))

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.groups)

    @property
    def distinct_weights(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.groups)

    def group_offsets(self) -> tuple[int, ...]:
        """Index of the first variable of each weight group."""
        offsets, acc = [], 0
        for _, r in self.groups:
            offsets.append(acc)
            acc += r
        return tuple(offsets)

    def group_of(self, i: int) -> int:
        for g, off in enumerate(self.group_offsets()):
            if off <= i < off + self.groups[g][1]:
                return g
        raise StructuralError(f"variable index {i} out of range")

    def grouped_label(self) -> str:
        return "P(" + ",".join(str(a) if r == 1 else f"{a}^{r}" for a, r in self.groups) + ")"

    def to_dict(self) -> dict:
        return {"weights": list(self.weights)}


def is_well_formed(P: WeightedProjectiveSpace) -> bool:
    """True iff any N of the N+1 weights are coprime."""
    ws = P.weights
    if len(ws) == 1:
        return ws[0] == 1
    return all(reduce(gcd, ws[:i] + ws[i + 1:]) == 1 for i in range(len(ws)))


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def singular_strata(P: WeightedProjectiveSpace) -> list[SingularStratum]:
    """Maximal index sets S whose weights share a factor > 1.

    Every such set lies inside S_q = {i : q | a_i} for a prime q, so the
    maximal ones are the inclusion-maximal S_q.  Sorted by index tuple.
    """
    if not is_well_formed(P):
        raise NotWellFormedError(f"{P.grouped_label()} is not well formed")
    primes = sorted({q for a in P.weights for q in _prime_factors(a)})
    candidates = {frozenset(i for i, a in enumerate(P.weights) if a % q == 0) for q in primes}
    maximal = [S for S in candidates if not any(S < T for T in candidates)]
    out = [
        SingularStratum(tuple(sorted(S)), reduce(gcd, (P.weights[i] for i in S)), len(S) - 1)
        for S in maximal
    ]
    return sorted(out, key=lambda s: s.indices)


def singular_strata_bruteforce(P: WeightedProjectiveSpace) -> list[SingularStratum]:
    """Subset scan over all index sets; exponential, for cross-checks at small N."""
    n = P.nvars
    hits = []
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            g = reduce(gcd, (P.weights[i] for i in S))
            if g > 1:
                hits.append(frozenset(S))
    maximal = [S for S in hits if not any(S < T for T in hits)]
    out = [
        SingularStratum(tuple(sorted(S)), reduce(gcd, (P.weights[i] for i in S)), len(S) - 1)
        for S in maximal
    ]
    return sorted(out, key=lambda s: s.indices)


def picard_generator(P: WeightedProjectiveSpace) -> int:
    """l = lcm of the weights; O(l) generates Pic of a well formed P."""
    if not is_well_formed(P):
        raise NotWellFormedError(f"{P.grouped_label()} is not well formed")
    return lcm(*P.weights)


def graded_dim(P: WeightedProjectiveSpace, m: int) -> int:
    """dim of the degree-m piece of the graded coordinate ring."""
    if m < 0:
        raise StructuralError("degree must be non-negative")
    return count_monomials(P.weights, m)


def series_quotient(numerator_degrees: Sequence[int], denominator_degrees: Sequence[int], up_to: int) -> list[int]:
    """Coefficients 0..up_to of prod(1 - t^d) / prod(1 - t^a)."""
    if up_to < 0:
        raise StructuralError("up_to must be non-negative")
    coeffs = [1] + [0] * up_to
    for d in numerator_degrees:
        for s in range(up_to, d - 1, -1):
            coeffs[s] -= coeffs[s - d]
    for a in denominator_degrees:
        # multiply by 1/(1 - t^a) = 1 + t^a + t^2a + ...
        for s in range(a, up_to + 1):
            coeffs[s] += coeffs[s - a]
    return coeffs


def hilbert_series_P(P: WeightedProjectiveSpace, up_to: int) -> list[int]:
    """Coefficients of 1 / prod(1 - t^{a_i}) up to degree ``up_to``."""
    return series_quotient((), P.weights, up_to)
