"""Explicit families whose invariance claims are checked as exact identities.

Formal group parameters (t and its inverse, or an additive alpha) are extra
trailing ring variables of weight 0; ``t * t^-1 = 1`` is applied as a
rewriting step, so invariance becomes equality in a polynomial ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .aut import PolynomialMap, is_unipotent_form, make_unipotent_element
from .errors import StructuralError
from .poly import Polynomial, count_monomials, random_homogeneous, substitute, variables
from .qs import ExplicitWCI, is_singular_cone_point, search_singular_points
from .wci import Kind, WCIDescriptor, classify, index, is_linear_cone
from .wps import WeightedProjectiveSpace, is_well_formed


@dataclass(frozen=True)
class LabRecord:
    example: str
    parameters: dict
    verified: bool
    details: dict

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "parameters": dict(self.parameters),
            "verified": self.verified,
            "details": dict(self.details),
        }


def cancel_inverse_pair(f: Polynomial, t: int, t_inv: int) -> Polynomial:
    """Normal form modulo t * t_inv - 1: strip min(e_t, e_tinv) from each monomial."""
    out: dict = {}
    for m, c in f.terms.items():
        k = min(m[t], m[t_inv])
        if k:
            m = list(m)
            m[t] -= k
            m[t_inv] -= k
            m = tuple(m)
        out[m] = out.get(m, 0) + c
    return Polynomial(f.nvars, out, f.modulus)


def specialize_last(f: Polynomial, value) -> Polynomial:
    """Set the last variable to ``value`` and drop it from the ring."""
    n = f.nvars - 1
    gens = variables(n, f.modulus)
    return substitute(f, gens + [Polynomial.constant(n, value, f.modulus)])


# x_{N-1} x_N + F(x_0..x_{N-2}) in P(1^{N-1}, a, a), preserved by (t x_{N-1}, t^-1 x_N)


@dataclass(frozen=True)
class TorusHypersurface:
    X: ExplicitWCI
    family: PolynomialMap  # over the ring extended by t, t^-1
    t_index: int
    t_inv_index: int

    def invariance_defect(self) -> Polynomial:
        f = self.X.equations[0]
        moved = cancel_inverse_pair(self.family.apply(f), self.t_index, self.t_inv_index)
        return moved - f.extend(2)


def build_torus_hypersurface(N: int, a: int, seed: int = 0) -> TorusHypersurface:
    if N <= 2 or a < 1:
        raise StructuralError("need N > 2 and a >= 1")
    weights = (1,) * (N - 1) + (a, a)
    n = N + 1
    rng = random.Random(seed)
    F = random_homogeneous(n, weights, 2 * a, rng, among=range(N - 1))
    x = variables(n)
    f = x[N - 1] * x[N] + F
    X = ExplicitWCI(WCIDescriptor.of(weights, (2 * a,)), (f,))
    y = variables(n + 2)
    t, t_inv = n, n + 1
    images = list(y[:n])
    images[N - 1] = y[t] * y[N - 1]
    images[N] = y[t_inv] * y[N]
    return TorusHypersurface(X, PolynomialMap(weights, tuple(images)), t, t_inv)


# x_{N-3} x_{N-1} + x_{N-2} x_N + F(x_0..x_{N-4}) in P(1^{N-1}, a, a), with the
# additive action x_{N-1} + alpha x_{N-2} Phi, x_N - alpha x_{N-3} Phi


@dataclass(frozen=True)
class AdditiveHypersurface:
    X: ExplicitWCI
    phi: Polynomial
    family: PolynomialMap  # over the ring extended by alpha
    s: int

    def invariance_defect(self) -> Polynomial:
        f = self.X.equations[0]
        return self.family.apply(f) - f.extend(1)

    def at(self, alpha) -> PolynomialMap:
        """The member of the family at a numeric alpha, as a map on P."""
        return PolynomialMap(self.X.descriptor.weights, tuple(specialize_last(g, alpha) for g in self.family.images))

    def unipotent_element(self, alpha) -> PolynomialMap:
        """The same member built through the unipotent-radical normal form.

        Only meaningful for a >= 2; with a = 1 the map is linear and lies in
        the reductive part instead.
        """
        P = self.X.descriptor.ambient
        N = P.dim
        x = variables(P.nvars)
        alpha = Fraction(alpha)
        phis = {
            (1, 0): x[N - 2] * self.phi * alpha,
            (1, 1): x[N - 3] * self.phi * (-alpha),
        }
        return make_unipotent_element(P, phis)


def build_additive_hypersurface(N: int, a: int, phi_seed: int = 0, f_seed: int = 0) -> AdditiveHypersurface:
    if N < 4 or a < 1:
        raise StructuralError("need N >= 4 and a >= 1")
    weights = (1,) * (N - 1) + (a, a)
    n = N + 1
    F = random_homogeneous(n, weights, a + 1, random.Random(f_seed), among=range(N - 3))
    phi = random_homogeneous(n, weights, a - 1, random.Random(phi_seed), among=range(N - 1))
    x = variables(n)
    f = x[N - 3] * x[N - 1] + x[N - 2] * x[N] + F
    X = ExplicitWCI(WCIDescriptor.of(weights, (a + 1,)), (f,))
    y = variables(n + 1)
    alpha = y[n]
    phi_ext = phi.extend(1)
    images = list(y[:n])
    images[N - 1] = y[N - 1] + alpha * y[N - 2] * phi_ext
    images[N] = y[N] - alpha * y[N - 3] * phi_ext
    s = count_monomials((1,) * (N - 1), a - 1)
    return AdditiveHypersurface(X, phi, PolynomialMap(weights, tuple(images)), s)


# f_2 = f_{2m} = 0 in P(1^N, m) and x_N -> x_N + f_2 g, trivial on X


@dataclass(frozen=True)
class TrivialAction:
    X: ExplicitWCI
    g: Polynomial
    sigma: PolynomialMap
    dim_g: int

    def quotient_by_f2(self) -> Polynomial:
        """h with f_{2m} o sigma - f_{2m} = f_2 h, by telescoping powers of x_N.

        Writing y = x_N and z = y + f_2 g, each z^k - y^k equals
        f_2 g (z^{k-1} + z^{k-2} y + ... + y^{k-1}).
        """
        f2, f2m = self.X.equations
        N = self.X.descriptor.ambient.dim
        y = Polynomial.variable(f2.nvars, N)
        z = self.sigma.images[N]
        h = Polynomial.zero(f2.nvars)
        for k, c in f2m.coefficients_in(N).items():
            geometric = Polynomial.zero(f2.nvars)
            for j in range(k):
                geometric = geometric + z**j * y ** (k - 1 - j)
            h = h + c * geometric
        return self.g * h


def build_trivial_action(N: int, m: int, g_seed: int = 0, f_seed: int = 0) -> TrivialAction:
    if N < 3 or m < 2:
        raise StructuralError("need N >= 3 and m >= 2")
    weights = (1,) * N + (m,)
    n = N + 1
    rng_f = random.Random(f_seed)
    f2 = random_homogeneous(n, weights, 2, rng_f, among=range(N))
    f2m = random_homogeneous(n, weights, 2 * m, rng_f)
    g = random_homogeneous(n, weights, m - 2, random.Random(g_seed), among=range(N))
    P = WeightedProjectiveSpace(weights)
    sigma = make_unipotent_element(P, {(1, 0): f2 * g})
    X = ExplicitWCI(WCIDescriptor(P, (2, 2 * m)), (f2, f2m))
    return TrivialAction(X, g, sigma, count_monomials((1,) * N, m - 2))


# hypersurfaces whose cone is singular away from the origin


@dataclass(frozen=True)
class NonQsExample:
    name: str
    X: ExplicitWCI
    expected_witness: tuple[int, ...]


def build_non_quasi_smooth(n: int = 3) -> list[NonQsExample]:
    """x0^2 x1 + x2^2 + ... + xn^2 in P(1, 2^n) and x0^3 - x1^2 in P(2, 3, 5^n)."""
    if n < 2:
        raise StructuralError("need n >= 2")
    x = variables(n + 1)
    f1 = x[0] ** 2 * x[1]
    for i in range(2, n + 1):
        f1 = f1 + x[i] ** 2
    ex1 = ExplicitWCI(WCIDescriptor.of((1,) + (2,) * n, (4,)), (f1,))
    w1 = (0, 1) + (0,) * (n - 1)
    y = variables(n + 2)
    f2 = y[0] ** 3 - y[1] ** 2
    ex2 = ExplicitWCI(WCIDescriptor.of((2, 3) + (5,) * n, (6,)), (f2,))
    w2 = (0, 0, 1) + (0,) * (n - 1)
    return [NonQsExample("quadric-cone-in-P(1,2^n)", ex1, w1), NonQsExample("cusp-in-P(2,3,5^n)", ex2, w2)]


# rational surface with ample canonical class from a nodal plane curve


@dataclass(frozen=True)
class NodalCurveSurfaceReport:
    d: int
    m: int
    ctilde_sq: int
    alpha: Fraction
    li_dot_l: Fraction
    k_coeff: Fraction
    ctilde_negative: bool
    k_effective: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "ctilde_sq": self.ctilde_sq,
            "alpha": str(self.alpha),
            "li_dot_l": str(self.li_dot_l),
            "k_coeff": str(self.k_coeff),
            "ctilde_negative": self.ctilde_negative,
            "k_effective": self.k_effective,
        }


def nodal_curve_surface_numbers(d: int) -> NodalCurveSurfaceReport:
    if d < 4:
        raise StructuralError("need d >= 4")
    m = (d - 1) * (d - 2) // 2
    ctilde_sq = -d * d + 6 * d - 4
    alpha = Fraction(-2, ctilde_sq)
    li_dot_l = Fraction(d * d, d * d - 6 * d + 4)
    k_coeff = 1 - Fraction(6, d)
    return NodalCurveSurfaceReport(d, m, ctilde_sq, alpha, li_dot_l, k_coeff, ctilde_sq < 0, d > 6)


# lab runners


def lab_torus(N: int = 4, a: int = 2, seed: int = 0) -> LabRecord:
    ex = build_torus_hypersurface(N, a, seed)
    defect = ex.invariance_defect()
    desc = ex.X.descriptor
    report = classify(desc)
    ok = defect.is_zero() and report.index == N - 1 and report.kind is Kind.FANO and not report.linear_cone
    return LabRecord(
        "torus-hypersurface",
        {"N": N, "a": a, "seed": seed},
        ok,
        {
            "descriptor": desc.to_dict(),
            "invariant": defect.is_zero(),
            "index": report.index,
            "kind": report.kind.value,
            "linear_cone": report.linear_cone,
            "terms": len(ex.X.equations[0]),
        },
    )


def lab_additive(N: int = 5, a: int = 2, phi_seed: int = 0, f_seed: int = 0) -> LabRecord:
    ex = build_additive_hypersurface(N, a, phi_seed, f_seed)
    defect = ex.invariance_defect()
    desc = ex.X.descriptor
    report = classify(desc)
    s_ok = ex.s == comb(a + N - 3, N - 2)
    if a >= 2:
        member = ex.at(Fraction(3, 2))
        unipotent = member == ex.unipotent_element(Fraction(3, 2)) and is_unipotent_form(desc.ambient, member)
    else:
        unipotent = None
    ok = (
        defect.is_zero()
        and s_ok
        and report.index == N + a - 2
        and report.kind is Kind.FANO
        and not report.linear_cone
        and unipotent is not False
    )
    return LabRecord(
        "additive-hypersurface",
        {"N": N, "a": a, "phi_seed": phi_seed, "f_seed": f_seed},
        ok,
        {
            "descriptor": desc.to_dict(),
            "invariant": defect.is_zero(),
            "s": ex.s,
            "s_matches_binomial": s_ok,
            "in_unipotent_radical": unipotent,
            "index": report.index,
            "kind": report.kind.value,
            "linear_cone": report.linear_cone,
        },
    )


def lab_trivial_action(N: int = 3, m: int = 2, g_seed: int = 0, f_seed: int = 0) -> LabRecord:
    ex = build_trivial_action(N, m, g_seed, f_seed)
    f2, f2m = ex.X.equations
    fixes_f2 = ex.sigma.apply(f2) == f2
    h = ex.quotient_by_f2()
    factors = ex.sigma.apply(f2m) - f2m == f2 * h
    dim_ok = ex.dim_g == comb(N + m - 3, N - 1)
    i = index(ex.X.descriptor)
    ok = fixes_f2 and factors and dim_ok and i == N - m - 2
    return LabRecord(
        "trivial-action",
        {"N": N, "m": m, "g_seed": g_seed, "f_seed": f_seed},
        ok,
        {
            "descriptor": ex.X.descriptor.to_dict(),
            "fixes_f2": fixes_f2,
            "difference_in_f2_ideal": factors,
            "dim_g": ex.dim_g,
            "dim_g_matches_binomial": dim_ok,
            "index": i,
            "fano": i > 0,
        },
    )


def lab_non_quasi_smooth(n: int = 3, prime: int = 5) -> list[LabRecord]:
    out = []
    for ex in build_non_quasi_smooth(n):
        budget = prime ** ex.X.nvars
        verdict = search_singular_points(ex.X, primes=(prime,), budget=budget)
        expected_q = is_singular_cone_point(ex.X, ex.expected_witness, None)
        found_q = verdict.found and is_singular_cone_point(ex.X, verdict.point, None)
        desc = ex.X.descriptor
        out.append(LabRecord(
            "non-quasi-smooth",
            {"name": ex.name, "n": n, "prime": prime},
            bool(expected_q and found_q),
            {
                "descriptor": desc.to_dict(),
                "ambient_well_formed": is_well_formed(desc.ambient),
                "expected_witness": list(ex.expected_witness),
                "expected_witness_singular_over_Q": expected_q,
                "found_witness": None if verdict.point is None else list(verdict.point),
                "found_witness_singular_over_Q": found_q,
                "linear_cone": is_linear_cone(desc),
            },
        ))
    return out


def lab_nodal_curve(d: int = 7) -> LabRecord:
    r = nodal_curve_surface_numbers(d)
    # independent routes: C~^2 = C^2 + 4 E^2 with E^2 = -m; L_i.L = -1 + 2 alpha m
    checks = {
        "ctilde_from_blowup": r.ctilde_sq == d * d - 4 * r.m,
        "alpha_relation": -r.alpha * r.ctilde_sq == 2,
        "projection_formula": r.li_dot_l == -1 + 2 * r.alpha * r.m,
        "canonical_coefficient": r.k_coeff == Fraction(d - 6, d),
    }
    return LabRecord("nodal-curve", {"d": d}, all(checks.values()), {**r.to_dict(), "checks": checks})


LAB_EXAMPLES: dict[str, Callable[..., LabRecord | list[LabRecord]]] = {
    "torus-hypersurface": lab_torus,
    "additive-hypersurface": lab_additive,
    "trivial-action": lab_trivial_action,
    "non-quasi-smooth": lab_non_quasi_smooth,
    "nodal-curve": lab_nodal_curve,
}


def run_lab(example: str, *params: int) -> list[LabRecord]:
    if example == "all":
        records: list[LabRecord] = []
        for name in LAB_EXAMPLES:
            records.extend(run_lab(name))
        return records
    try:
        fn = LAB_EXAMPLES[example]
    except KeyError:
        raise StructuralError(f"unknown lab example {example!r}; choose from {sorted(LAB_EXAMPLES)} or 'all'")
    try:
        result = fn(*params)
    except TypeError as exc:
        raise StructuralError(f"bad parameters for {example}: {exc}") from exc
    return result if isinstance(result, list) else [result]
