"""Bounded enumeration of candidate weighted complete intersections."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator, Sequence

from .errors import InfeasibleError, StructuralError
from .qs import DEFAULT_BUDGET, DEFAULT_PRIMES, random_member, search_singular_points
from .wci import FAILS, WCIDescriptor, classify, generic_wellformedness, index, is_linear_cone
from .wps import WeightedProjectiveSpace, is_well_formed

MAX_TUPLES = 10**7


@dataclass(frozen=True)
class SearchBounds:
    max_n: int
    max_weight: int
    max_degree: int
    codim: int = 1
    index_filter: str | int | None = None  # "positive" | "zero" | "negative" | exact int | None
    min_n: int = 1
    min_degree: int = 1

    def __post_init__(self):
        for name in ("max_n", "max_weight", "max_degree", "min_n", "min_degree"):
            if getattr(self, name) < 1:
                raise StructuralError(f"{name} must be positive")
        if self.codim not in (1, 2):
            raise StructuralError("codim must be 1 or 2")
        f = self.index_filter
        if f is not None and not isinstance(f, int) and f not in ("positive", "zero", "negative"):
            raise StructuralError(f"bad index filter {f!r}")

    def ambient_dims(self) -> range:
        return range(max(self.min_n, self.codim), self.max_n + 1)

    def tuple_count(self) -> int:
        n_weights = sum(comb(self.max_weight + N, N + 1) for N in self.ambient_dims())
        span = max(0, self.max_degree - self.min_degree + 1)
        return n_weights * comb(span + self.codim - 1, self.codim)

    def accepts_index(self, i: int) -> bool:
        f = self.index_filter
        if f is None:
            return True
        if f == "positive":
            return i > 0
        if f == "zero":
            return i == 0
        if f == "negative":
            return i < 0
        return i == f


@dataclass(frozen=True)
class ProbeOptions:
    primes: tuple[int, ...] = DEFAULT_PRIMES
    budget: int = DEFAULT_BUDGET
    seed: int = 0


def iter_weight_tuples(bounds: SearchBounds) -> Iterator[tuple[int, ...]]:
    for N in bounds.ambient_dims():
        yield from combinations_with_replacement(range(1, bounds.max_weight + 1), N + 1)


def candidates_for_weights(
    weights: Sequence[int], bounds: SearchBounds, probe: ProbeOptions | None = None
) -> list[dict]:
    """Records for every multidegree that passes the filters over one weight tuple."""
    P = WeightedProjectiveSpace(tuple(weights))
    if not is_well_formed(P):
        return []
    out = []
    for ds in combinations_with_replacement(range(bounds.min_degree, bounds.max_degree + 1), bounds.codim):
        X = WCIDescriptor(P, ds)
        if is_linear_cone(X) or not bounds.accepts_index(index(X)):
            continue
        gw = generic_wellformedness(X)
        if gw.status == FAILS:
            continue
        record = {**X.to_dict(), **classify(X).to_dict(), "generic_wellformedness": gw.status}
        if probe is not None:
            record["qs"] = _probe(X, probe)
        out.append(record)
    return out


def _probe(X: WCIDescriptor, probe: ProbeOptions) -> dict | None:
    try:
        member = random_member(X, probe.seed)
    except StructuralError:
        return None  # some degree has no monomials: no member with nonzero equations
    return search_singular_points(member, probe.primes, probe.budget, probe.seed).to_dict()


def search(bounds: SearchBounds, threads: int = 1, probe: ProbeOptions | None = None) -> list[dict]:
    """All passing descriptors, sorted by (weights, degrees) whatever the thread count."""
    total = bounds.tuple_count()
    if total > MAX_TUPLES:
        raise InfeasibleError(f"{total} candidate tuples exceeds the limit {MAX_TUPLES}")
    tuples = list(iter_weight_tuples(bounds))
    work = partial(candidates_for_weights, bounds=bounds, probe=probe)
    if threads > 1 and len(tuples) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, tuples, chunksize=max(1, len(tuples) // (4 * threads))))
    else:
        chunks = [work(ws) for ws in tuples]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r["weights"], r["degrees"]))
    return records
