"""Exact sparse multivariate polynomials over Q and prime fields.

A polynomial in ``n`` variables is a map from exponent tuples to nonzero
coefficients.  Over the rationals coefficients are :class:`fractions.Fraction`;
over ``F_p`` they are canonical integer representatives in ``[0, p)``.

  x0^2*x1 + 3   ->  {(2, 1): Fraction(1), (0, 0): Fraction(3)}

Values are immutable; every operation returns a new polynomial.  The
canonical term order (used for printing and serialization) is by weighted
degree, then lexicographic on exponents, both descending.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import StructuralError

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

MAX_MODULUS = 2**61


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(modulus: int | None) -> int | None:
    if modulus is None:
        return None
    if not isinstance(modulus, int) or not (2 <= modulus < MAX_MODULUS) or not is_prime(modulus):
        raise StructuralError(f"field modulus must be a prime below 2^61, got {modulus!r}")
    return modulus


def to_field(value, modulus: int | None) -> Scalar:
    """Coerce a scalar into Q (modulus None) or F_p; floats are refused."""
    if isinstance(value, float) or not isinstance(value, (int, Fraction)):
        raise StructuralError(f"exact scalar expected, got {type(value).__name__}")
    if modulus is None:
        return Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator % modulus == 0:
            raise StructuralError(f"denominator {value.denominator} not invertible mod {modulus}")
        return value.numerator * pow(value.denominator, -1, modulus) % modulus
    return value % modulus


def weighted_degree(m: Sequence[int], w: Sequence[int]) -> int:
    """Return sum(e_i * a_i) for exponent vector ``m`` and weights ``w``."""
    if len(m) != len(w):
        raise StructuralError(f"monomial has {len(m)} exponents but {len(w)} weights given")
    return sum(e * a for e, a in zip(m, w))


def _check_positive_weights(w: Sequence[int]) -> tuple[int, ...]:
    w = tuple(int(a) for a in w)
    if any(a <= 0 for a in w):
        raise StructuralError(f"weights must be positive, got {w}")
    return w


@lru_cache(maxsize=4096)
def _count_table(w: tuple[int, ...], d: int) -> tuple[int, ...]:
    # coin-change DP: ways[s] = #{e >= 0 : sum e_i a_i = s}, one variable at a time
    ways = [1] + [0] * d
    for a in w:
        for s in range(a, d + 1):
            ways[s] += ways[s - a]
    return tuple(ways)


def count_monomials(w: Sequence[int], d: int) -> int:
    """Number of monomials of weighted degree ``d`` (0 when ``d < 0``)."""
    w = _check_positive_weights(w)
    if d < 0:
        return 0
    return _count_table(w, d)[d]


def enumerate_monomials(w: Sequence[int], d: int) -> list[Monomial]:
    """All exponent vectors of weighted degree ``d``, in descending lex order.

    >>> enumerate_monomials((2, 3), 6)
    [(3, 0), (0, 2)]
    """
    w = _check_positive_weights(w)
    if d < 0:
        return []
    n = len(w)
    out: list[Monomial] = []
    prefix = [0] * n

    def rec(i: int, rest: int) -> None:
        if i == n:
            if rest == 0:
                out.append(tuple(prefix))
            return
        a = w[i]
        for e in range(rest // a, -1, -1):
            prefix[i] = e
            rec(i + 1, rest - e * a)
        prefix[i] = 0

    rec(0, d)
    return out


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables over Q or F_p."""

    __slots__ = ("_terms", "_nvars", "_modulus", "_hash")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Sequence[int], object] | Iterable[tuple[Sequence[int], object]] = (),
        modulus: int | None = None,
    ):
        if nvars < 0:
            raise StructuralError("nvars must be non-negative")
        modulus = check_modulus(modulus)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Scalar] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise StructuralError(f"monomial {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise StructuralError(f"negative exponent in {exps}")
            c = to_field(c, modulus)
            acc[exps] = acc.get(exps, 0) + c
        if modulus is not None:
            acc = {m: c % modulus for m, c in acc.items()}
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._nvars = nvars
        self._modulus = modulus
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, modulus: int | None) -> "Polynomial":
        # trusted constructor: terms already canonical and zero-free
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._nvars = nvars
        obj._modulus = modulus
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, nvars: int, modulus: int | None = None) -> "Polynomial":
        return cls(nvars, (), modulus)

    @classmethod
    def constant(cls, nvars: int, value: Scalar, modulus: int | None = None) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value}, modulus)

    @classmethod
    def variable(cls, nvars: int, i: int, modulus: int | None = None) -> "Polynomial":
        if not 0 <= i < nvars:
            raise StructuralError(f"variable index {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1}, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Scalar = 1, modulus: int | None = None) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff}, modulus)

    # accessors

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exps), 0 if self._modulus is not None else Fraction(0))

    def sorted_terms(self, weights: Sequence[int] | None = None) -> list[tuple[Monomial, Scalar]]:
        """Terms in canonical order: weighted degree, then lex, descending."""
        w = weights if weights is not None else (1,) * self._nvars
        return sorted(self._terms.items(), key=lambda t: (weighted_degree(t[0], w), t[0]), reverse=True)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {weighted_degree(m, weights) for m in self._terms}

    def is_homogeneous(self, weights: Sequence[int], degree: int | None = None) -> bool:
        """True if every term has the same weighted degree (``degree`` if given).

        The zero polynomial is homogeneous of every degree.
        """
        degs = self.weighted_degrees(weights)
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def support(self) -> set[int]:
        """Indices of variables that occur in some term."""
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self._terms), default=0)

    def coefficients_in(self, i: int) -> dict[int, "Polynomial"]:
        """Split f = sum_k c_k * x_i^k; returns {k: c_k} with c_k free of x_i."""
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            k = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            parts.setdefault(k, {})[rest] = c
        return {k: Polynomial._raw(self._nvars, t, self._modulus) for k, t in sorted(parts.items())}

    def extend(self, extra: int) -> "Polynomial":
        """Embed into a ring with ``extra`` new trailing variables."""
        pad = (0,) * extra
        return Polynomial._raw(self._nvars + extra, {m + pad: c for m, c in self._terms.items()}, self._modulus)

    def reduce_mod(self, p: int) -> "Polynomial":
        """Image in F_p[x]; raises if p divides a denominator."""
        if self._modulus is not None:
            if self._modulus != p:
                raise StructuralError(f"cannot reduce an F_{self._modulus} polynomial mod {p}")
            return self
        check_modulus(p)
        return Polynomial(self._nvars, self._terms, p)

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial(self._nvars, {m: fn(c) for m, c in self._terms.items()}, self._modulus)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise StructuralError(f"variable count mismatch: {self._nvars} vs {other._nvars}")
            if other._modulus != self._modulus:
                raise StructuralError(f"field mismatch: {self._modulus} vs {other._modulus}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self._nvars, other, self._modulus)
        return NotImplemented

    def _reduce(self, c):
        return c % self._modulus if self._modulus is not None else c

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = self._reduce(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self._nvars, out, self._modulus)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._nvars, {m: self._reduce(-c) for m, c in self._terms.items()}, self._modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if self._modulus is not None:
            p = self._modulus
            out = {m: c % p for m, c in out.items()}
        return Polynomial._raw(self._nvars, {m: c for m, c in out.items() if c != 0}, self._modulus)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("only non-negative integer powers are supported")
        result = Polynomial.constant(self._nvars, 1, self._modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self._nvars == other._nvars
                and self._modulus == other._modulus
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self._nvars, other, self._modulus)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, self._modulus, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif self._modulus is None and c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        field = "Q" if self._modulus is None else f"F_{self._modulus}"
        return f"Polynomial<{field}, {self._nvars} vars>({self})"

    # serialization

    def to_json(self, weights: Sequence[int] | None = None) -> list[list[int]]:
        """Terms as ``[numerator, denominator, e_0, ..., e_N]`` in canonical order."""
        rows = []
        for m, c in self.sorted_terms(weights):
            if self._modulus is None:
                rows.append([c.numerator, c.denominator, *m])
            else:
                rows.append([int(c), 1, *m])
        return rows

    @classmethod
    def from_json(cls, rows: Iterable[Sequence[int]], nvars: int, modulus: int | None = None) -> "Polynomial":
        terms = []
        for row in rows:
            row = list(row)
            if len(row) != nvars + 2:
                raise StructuralError(f"term row {row} should have {nvars + 2} integers")
            num, den, *exps = row
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
                raise StructuralError(f"term row {row} must contain integers only")
            if den == 0:
                raise StructuralError("zero denominator in serialized term")
            terms.append((exps, Fraction(num, den)))
        return cls(nvars, terms, modulus)


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    """Formal derivative of ``f`` with respect to ``x_i``."""
    if not 0 <= i < f.nvars:
        raise StructuralError(f"variable index {i} out of range for {f.nvars} variables")
    out = {}
    for m, c in f.terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return Polynomial(f.nvars, out, f.modulus)


def evaluate(f: Polynomial, point: Sequence[Scalar]) -> Scalar:
    """Exact value of ``f`` at ``point``; the point must live in f's field."""
    if len(point) != f.nvars:
        raise StructuralError(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    p = f.modulus
    if p is not None:
        for v in point:
            if isinstance(v, Fraction) and v.denominator != 1:
                raise StructuralError("rational coordinate passed to a prime-field polynomial")
    xs = [to_field(v, p) for v in point]
    total: Scalar = 0 if p is not None else Fraction(0)
    for m, c in f.terms.items():
        term = c
        for x, e in zip(xs, m):
            if e:
                term = term * (pow(x, e, p) if p is not None else x**e)
        total += term
    return total % p if p is not None else total


def substitute(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Replace each ``x_i`` in ``f`` by ``images[i]`` and expand."""
    if len(images) != f.nvars:
        raise StructuralError(f"{len(images)} images given for {f.nvars} variables")
    if not images:
        raise StructuralError("substitution into a ring with no variables")
    target = images[0]
    for g in images:
        if g.nvars != target.nvars or g.modulus != target.modulus:
            raise StructuralError("substitution images must share one ring")
    if f.modulus != target.modulus:
        raise StructuralError(f"field mismatch: {f.modulus} vs {target.modulus}")
    n, p = target.nvars, target.modulus
    powers: list[dict[int, Polynomial]] = [{} for _ in images]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            cache[e] = images[i] ** e
        return cache[e]

    result = Polynomial.zero(n, p)
    for m, c in f.terms.items():
        term = Polynomial.constant(n, c, p)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


def variables(n: int, modulus: int | None = None) -> list[Polynomial]:
    """The generators x_0, ..., x_{n-1}."""
    return [Polynomial.variable(n, i, modulus) for i in range(n)]


def random_homogeneous(
    nvars: int,
    weights: Sequence[int],
    degree: int,
    rng: random.Random,
    among: Sequence[int] | None = None,
    coeff_range: tuple[int, int] = (1, 97),
) -> Polynomial:
    """Polynomial with every monomial of weighted ``degree`` present.

    Only variables listed in ``among`` (default: all) occur; coefficients are
    drawn uniformly from ``coeff_range``, so none of them is zero.
    """
    among = list(range(nvars)) if among is None else list(among)
    sub_w = [weights[i] for i in among]
    terms = []
    for e in enumerate_monomials(sub_w, degree):
        exps = [0] * nvars
        for i, k in zip(among, e):
            exps[i] = k
        terms.append((exps, rng.randint(*coeff_range)))
    return Polynomial(nvars, terms)
