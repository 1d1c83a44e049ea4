"""Affine-cone Jacobian checks for explicit weighted complete intersections.

X is quasi-smooth when its affine cone is smooth away from the origin, i.e.
the Jacobian of the equations has rank k at every nonzero cone point.  Over
a finite field F_p we either scan all of F_p^{N+1} or sample it; a singular
point found is a proof for that reduction, while finding none is evidence
only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InfeasibleError, StructuralError
from .poly import Polynomial, evaluate, is_prime, partial_derivative, random_homogeneous, to_field
from .wci import WCIDescriptor

DEFAULT_PRIMES = (5, 7, 11)
DEFAULT_BUDGET = 200_000
PROBE_LIMIT = 10**8
_BLOCK = 1 << 16
_MAX_SCAN_PRIME = 1 << 31  # keeps int64 products below 2^62

SINGULAR_FOUND = "SingularConePointFound"
NONE_FOUND = "NoSingularPointFound"


@dataclass(frozen=True)
class ExplicitWCI:
    """A descriptor plus its k defining equations (over Q).

    Equations are reordered by degree to line up with the sorted multidegree;
    variable i carries weight ``descriptor.weights[i]``.
    """

    descriptor: WCIDescriptor
    equations: tuple[Polynomial, ...]

    def __post_init__(self):
        eqs = tuple(self.equations)
        w = self.descriptor.weights
        if len(eqs) != self.descriptor.codim:
            raise StructuralError(f"{len(eqs)} equations for codimension {self.descriptor.codim}")
        degs = []
        for f in eqs:
            if f.nvars != len(w):
                raise StructuralError(f"equation has {f.nvars} variables, ambient has {len(w)}")
            if f.modulus is not None:
                raise StructuralError("equations must be given over Q")
            if f.is_zero():
                raise StructuralError("an equation is identically zero")
            ds = f.weighted_degrees(w)
            if len(ds) != 1:
                raise StructuralError(f"equation {f} is not weighted homogeneous")
            degs.append(ds.pop())
        order = sorted(range(len(eqs)), key=lambda j: degs[j])
        if tuple(degs[j] for j in order) != self.descriptor.degrees:
            raise StructuralError(
                f"equation degrees {sorted(degs)} do not match multidegree {list(self.descriptor.degrees)}"
            )
        object.__setattr__(self, "equations", tuple(eqs[j] for j in order))

    @property
    def nvars(self) -> int:
        return self.descriptor.ambient.nvars

    def to_json(self) -> dict:
        out = self.descriptor.to_dict()
        out["equations"] = [f.to_json(self.descriptor.weights) for f in self.equations]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ExplicitWCI":
        desc = WCIDescriptor.from_dict(data)
        if list(data["weights"]) != list(desc.weights):
            raise StructuralError("weights must be listed in ascending order when equations are given")
        rows = data.get("equations")
        if rows is None:
            raise StructuralError("descriptor has no 'equations'")
        return cls(desc, tuple(Polynomial.from_json(r, desc.ambient.nvars) for r in rows))


def jacobian(X: ExplicitWCI) -> list[list[Polynomial]]:
    """k x (N+1) matrix with entry (j, i) = d f_j / d x_i."""
    return [[partial_derivative(f, i) for i in range(X.nvars)] for f in X.equations]


def matrix_rank(rows: Sequence[Sequence], modulus: int | None = None) -> int:
    """Rank by exact Gaussian elimination over Q or F_p."""
    if modulus is None:
        A = [[Fraction(v) for v in row] for row in rows]
    else:
        A = [[int(v) % modulus for v in row] for row in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        if modulus is None:
            inv = 1 / A[rank][c]
            A[rank] = [v * inv for v in A[rank]]
            for r in range(len(A)):
                if r != rank and A[r][c]:
                    f = A[r][c]
                    A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        else:
            inv = pow(A[rank][c], -1, modulus)
            A[rank] = [v * inv % modulus for v in A[rank]]
            for r in range(len(A)):
                if r != rank and A[r][c]:
                    f = A[r][c]
                    A[r] = [(x - f * y) % modulus for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def is_singular_cone_point(X: ExplicitWCI, point: Sequence, field: int | None = None) -> bool:
    """True iff ``point`` (nonzero) lies on the cone and the Jacobian rank there is < k.

    ``field`` is None for Q or a prime p, in which case equations are reduced mod p.
    """
    if len(point) != X.nvars:
        raise StructuralError(f"point has {len(point)} coordinates, expected {X.nvars}")
    pt = [to_field(v, field) for v in point]
    if all(v == 0 for v in pt):
        raise StructuralError("the origin is excluded: point must be nonzero")
    eqs = X.equations if field is None else tuple(f.reduce_mod(field) for f in X.equations)
    if any(evaluate(f, pt) != 0 for f in eqs):
        return False
    J = [[evaluate(partial_derivative(f, i), pt) for i in range(X.nvars)] for f in eqs]
    return matrix_rank(J, field) < len(eqs)


# vectorized evaluation over blocks of F_p points


class _Powers:
    def __init__(self, pts: np.ndarray, p: int):
        self.pts = pts
        self.p = p
        self.cache: dict[tuple[int, int], np.ndarray] = {}

    def get(self, i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in self.cache:
            if e == 1:
                self.cache[key] = self.pts[:, i]
            else:
                self.cache[key] = self.get(i, e - 1) * self.pts[:, i] % self.p
        return self.cache[key]


def _eval_block(f: Polynomial, pw: _Powers) -> np.ndarray:
    p = pw.p
    out = np.zeros(pw.pts.shape[0], dtype=np.int64)
    for m, c in f.terms.items():
        term = np.full(pw.pts.shape[0], int(c) % p, dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                term = term * pw.get(i, e) % p
        out = (out + term) % p
    return out


def _modinv(a: np.ndarray, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


class _ReducedSystem:
    """Equations and partials mod p, with block-wise singularity detection."""

    def __init__(self, X: ExplicitWCI, p: int, euler_shortcut: bool):
        self.p = p
        self.eqs = [f.reduce_mod(p) for f in X.equations]
        self.grads = [[partial_derivative(f, i) for i in range(X.nvars)] for f in self.eqs]
        # Euler: sum a_i x_i df/dx_i = d f, so a zero gradient forces f = 0 when p does not divide d
        self.skip_eval = euler_shortcut and len(self.eqs) == 1 and X.descriptor.degrees[0] % p != 0

    def cone_mask(self, pw: _Powers) -> np.ndarray:
        mask = np.ones(pw.pts.shape[0], dtype=bool)
        for f in self.eqs:
            mask &= _eval_block(f, pw) == 0
        return mask

    def singular_positions(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        """Indices (into pts) of singular cone points and of all cone points.

        The second array is None under the Euler shortcut, where cone
        membership is never evaluated.
        """
        pw = _Powers(pts, self.p)
        if self.skip_eval:
            zero = np.ones(pts.shape[0], dtype=bool)
            for g in self.grads[0]:
                zero &= _eval_block(g, pw) == 0
            return np.flatnonzero(zero), None
        mask = self.cone_mask(pw)
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return idx, idx
        sub = _Powers(pts[idx], self.p)
        J = np.stack([np.stack([_eval_block(g, sub) for g in row]) for row in self.grads])
        k = len(self.eqs)
        if k == 1:
            sing = ~(J[0] != 0).any(axis=0)
        else:
            sing = np.array(
                [matrix_rank(J[:, :, t].tolist(), self.p) < k for t in range(idx.size)], dtype=bool
            )
        return idx[sing], idx


def _block_points(start: int, stop: int, p: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    pts = np.empty((idx.size, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        pts[:, j] = idx % p
        idx = idx // p
    return pts


def _check_scan_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise StructuralError(f"primes must be odd primes, got {p!r}")
    if p >= _MAX_SCAN_PRIME:
        raise StructuralError(f"prime {p} too large for point scans (limit 2^31)")


@dataclass(frozen=True)
class QsVerdict:
    status: str
    point: tuple[int, ...] | None
    prime: int | None
    primes_tested: tuple[int, ...]
    samples: int
    cone_points: int
    witnesses: tuple[dict, ...] = ()
    per_prime: tuple[dict, ...] = field(default=())

    @property
    def found(self) -> bool:
        return self.status == SINGULAR_FOUND

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "point": None if self.point is None else list(self.point),
            "prime": self.prime,
            "primes_tested": list(self.primes_tested),
            "samples": self.samples,
            "cone_points": self.cone_points,
            "witnesses": [dict(w) for w in self.witnesses],
            "per_prime": [dict(r) for r in self.per_prime],
        }


def _count_upto(cone_idx: np.ndarray | None, last: int | None) -> int:
    if cone_idx is None:
        return 0
    if last is None:
        return int(cone_idx.size)
    return int(np.count_nonzero(cone_idx <= last))


def _scan_exhaustive(system: _ReducedSystem, p: int, n: int):
    total = p**n
    cone = 0
    for start in range(1, total, _BLOCK):
        stop = min(total, start + _BLOCK)
        pts = _block_points(start, stop, p, n)
        hits, cone_idx = system.singular_positions(pts)
        if hits.size:
            first = int(hits[0])
            cone += _count_upto(cone_idx, first)
            return tuple(int(v) for v in pts[first]), start + first, cone
        cone += _count_upto(cone_idx, None)
    return None, total - 1, cone


def _solvable_variable(f: Polynomial) -> int | None:
    """Largest index j with f of degree exactly 1 in x_j."""
    for j in range(f.nvars - 1, -1, -1):
        if f.degree_in(j) == 1:
            return j
    return None


def _scan_sampled(system: _ReducedSystem, p: int, n: int, budget: int, seed: int):
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), p]))
    solve_j = _solvable_variable(system.eqs[0]) if len(system.eqs) == 1 else None
    if solve_j is not None:
        parts = system.eqs[0].coefficients_in(solve_j)
        lin = parts.get(1)
        const = parts.get(0, Polynomial.zero(n, p))
    drawn, cone = 0, 0
    while drawn < budget:
        size = min(_BLOCK, budget - drawn)
        pts = rng.integers(0, p, size=(size, n), dtype=np.int64)
        if solve_j is not None:
            pw = _Powers(pts, p)
            A = _eval_block(lin, pw)
            B = _eval_block(const, pw) if not const.is_zero() else np.zeros(size, dtype=np.int64)
            ok = A != 0
            pts[ok, solve_j] = (-B[ok] * _modinv(A[ok], p)) % p
            # A = 0: x_j is free, keep the sampled value (a cone point only if B = 0 as well)
        pts = pts[(pts != 0).any(axis=1)]
        hits, cone_idx = system.singular_positions(pts)
        if hits.size:
            first = int(hits[0])
            cone += _count_upto(cone_idx, first)
            return tuple(int(v) for v in pts[first]), drawn + first + 1, cone
        cone += _count_upto(cone_idx, None)
        drawn += size
    return None, drawn, cone


def search_singular_points(
    X: ExplicitWCI,
    primes: Sequence[int] = DEFAULT_PRIMES,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    euler_shortcut: bool = False,
) -> QsVerdict:
    """Look for a nonzero singular point of the affine cone over F_p.

    For each prime in turn: scan all of F_p^{N+1} in lexicographic order when
    p^{N+1} <= budget (the witness is then the lex-smallest singular point),
    otherwise draw ``budget`` seeded points.  Stops at the first prime that
    yields a witness.
    """
    if budget <= 0:
        raise StructuralError("budget must be positive")
    primes = tuple(primes)
    if not primes:
        raise StructuralError("at least one prime is required")
    for p in primes:
        _check_scan_prime(p)
    n = X.nvars
    tested, rows = [], []
    total_points = total_cone = 0
    for p in primes:
        system = _ReducedSystem(X, p, euler_shortcut)  # raises if p divides a denominator
        exhaustive = p**n <= budget
        if exhaustive:
            point, examined, cone = _scan_exhaustive(system, p, n)
        else:
            point, examined, cone = _scan_sampled(system, p, n, budget, seed)
        tested.append(p)
        total_points += examined
        total_cone += cone
        rows.append({
            "prime": p,
            "mode": "exhaustive" if exhaustive else "sampled",
            "points": examined,
            "cone_points": cone,
        })
        if point is not None:
            witness = {"prime": p, "point": list(point)}
            return QsVerdict(SINGULAR_FOUND, point, p, tuple(tested), total_points, total_cone, (witness,), tuple(rows))
    return QsVerdict(NONE_FOUND, None, None, tuple(tested), total_points, total_cone, (), tuple(rows))


@dataclass(frozen=True)
class ConeProbe:
    prime: int
    count: int
    codim_estimate: int
    expected_codim: int

    @property
    def matches_expected(self) -> bool:
        return self.codim_estimate == self.expected_codim

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "count": self.count,
            "codim_estimate": self.codim_estimate,
            "expected_codim": self.expected_codim,
            "matches_expected": self.matches_expected,
        }


def cone_dimension_probe(X: ExplicitWCI, p: int) -> ConeProbe:
    """Count F_p points of the cone (origin included) and read off a codimension.

    The estimate is the c minimizing |count - p^{N+1-c}|, ties to the smaller c.
    """
    _check_scan_prime(p)
    n = X.nvars
    total = p**n
    if total > PROBE_LIMIT:
        raise InfeasibleError(f"{p}^{n} points exceeds the probe limit {PROBE_LIMIT}")
    system = _ReducedSystem(X, p, euler_shortcut=False)
    count = 0
    for start in range(0, total, _BLOCK):
        pts = _block_points(start, min(total, start + _BLOCK), p, n)
        count += int(system.cone_mask(_Powers(pts, p)).sum())
    best = min(range(n + 1), key=lambda c: (abs(count - p ** (n - c)), c))
    return ConeProbe(p, count, best, X.descriptor.codim)


def random_member(descriptor: WCIDescriptor, seed: int) -> ExplicitWCI:
    """Seeded member with every monomial present and coefficients in 1..97."""
    rng = random.Random(f"member:{seed}:{descriptor.label()}")
    n = descriptor.ambient.nvars
    eqs = tuple(random_homogeneous(n, descriptor.weights, d, rng) for d in descriptor.degrees)
    return ExplicitWCI(descriptor, eqs)
