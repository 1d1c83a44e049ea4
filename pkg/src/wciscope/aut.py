"""Structure of Aut(P) for a well formed weighted projective space.

Aut(P) splits as a unipotent radical, made of the substitutions
x_{i,p} -> x_{i,p} + Phi_{i,p}(lower-weight variables), and a reductive
part (GL_{r_0} x ... x GL_{r_M}) / C^*, the C^* acting by t^{a_i} on the
i-th weight group.  Elements are materialized as :class:`PolynomialMap`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NotWellFormedError, StructuralError
from .poly import Polynomial, count_monomials, substitute, to_field
from .wps import WeightedProjectiveSpace, is_well_formed


@dataclass(frozen=True)
class AutPStructure:
    unipotent_dim: int
    reductive_factors: tuple[int, ...]
    reductive_dim: int
    total_dim: int
    per_weight_phi_dims: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "unipotent_dim": self.unipotent_dim,
            "reductive_factors": list(self.reductive_factors),
            "reductive_dim": self.reductive_dim,
            "total_dim": self.total_dim,
            "per_weight_phi_dims": list(self.per_weight_phi_dims),
        }


def _require_well_formed(P: WeightedProjectiveSpace) -> None:
    if not is_well_formed(P):
        raise NotWellFormedError(
            f"{P.grouped_label()} is not well formed; the unipotent/reductive description "
            "of Aut(P) needs well-formedness (P(1,2) is isomorphic to P^1, whose "
            "automorphism group is PGL_2, not the group the formula predicts)"
        )


def aut_structure(P: WeightedProjectiveSpace) -> AutPStructure:
    _require_well_formed(P)
    phi_dims = []
    lower: list[int] = []
    for a, r in P.groups:
        phi_dims.append(count_monomials(lower, a) if lower else 0)
        lower.extend([a] * r)
    factors = P.multiplicities
    unipotent = sum(r * k for r, k in zip(factors, phi_dims))
    reductive = sum(r * r for r in factors) - 1
    return AutPStructure(unipotent, factors, reductive, unipotent + reductive, tuple(phi_dims))


@dataclass(frozen=True)
class PolynomialMap:
    """Coordinate substitution x_i -> images[i] on P(weights).

    Images may live in a larger ring whose extra trailing variables are formal
    parameters of weight 0; each image of x_i must be homogeneous of degree a_i.
    """

    weights: tuple[int, ...]
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.weights):
            raise StructuralError(f"{len(self.images)} images for {len(self.weights)} coordinates")
        ring = {(g.nvars, g.modulus) for g in self.images}
        if len(ring) != 1:
            raise StructuralError("images must share one ring")
        (nvars, _), = ring
        if nvars < len(self.weights):
            raise StructuralError("image ring has fewer variables than the space")
        rw = self.ring_weights
        for i, (a, g) in enumerate(zip(self.weights, self.images)):
            if not g.is_homogeneous(rw, a) or g.is_zero():
                raise StructuralError(f"image of x{i} is not a nonzero homogeneous polynomial of degree {a}")

    @property
    def nvars(self) -> int:
        return self.images[0].nvars

    @property
    def ring_weights(self) -> tuple[int, ...]:
        return self.weights + (0,) * (self.nvars - len(self.weights))

    def apply(self, f: Polynomial) -> Polynomial:
        """f o sigma, i.e. f with x_i replaced by the i-th image."""
        if f.nvars != len(self.weights):
            raise StructuralError(f"polynomial has {f.nvars} variables, map acts on {len(self.weights)}")
        return substitute(f, self.images)

    def is_identity(self) -> bool:
        return self == identity_map(self.weights, self.nvars - len(self.weights), self.images[0].modulus)

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "images": [g.to_json(self.ring_weights) for g in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> "PolynomialMap":
        weights = tuple(data["weights"])
        rows = data["images"]
        nvars = len(rows[0][0]) - 2 if rows and rows[0] else len(weights)
        return cls(weights, tuple(Polynomial.from_json(r, nvars) for r in rows))


def identity_map(weights: Sequence[int], extra: int = 0, modulus: int | None = None) -> PolynomialMap:
    n = len(weights) + extra
    return PolynomialMap(tuple(weights), tuple(Polynomial.variable(n, i, modulus) for i in range(len(weights))))


def make_unipotent_element(
    P: WeightedProjectiveSpace, phis: Mapping[tuple[int, int], Polynomial]
) -> PolynomialMap:
    """The map x_{i,p} -> x_{i,p} + Phi_{i,p}.

    Keys are (weight group, position in group), both 0-based.  Each Phi must
    be homogeneous of degree a_i and involve only variables of strictly
    smaller weight; anything else is rejected.
    """
    _require_well_formed(P)
    n = P.nvars
    offsets = P.group_offsets()
    images = [Polynomial.variable(n, j) for j in range(n)]
    for (g, pos), phi in phis.items():
        if not 0 <= g < len(P.groups) or not 0 <= pos < P.groups[g][1]:
            raise StructuralError(f"no coordinate ({g}, {pos}) in {P.grouped_label()}")
        a = P.groups[g][0]
        if phi.nvars != n or phi.modulus is not None:
            raise StructuralError(f"Phi_({g},{pos}) must be a rational polynomial in {n} variables")
        if phi.is_zero():
            continue
        if not phi.is_homogeneous(P.weights, a):
            raise StructuralError(f"Phi_({g},{pos}) is not homogeneous of degree {a}")
        bad = [j for j in phi.support() if P.weights[j] >= a]
        if bad:
            raise StructuralError(
                f"Phi_({g},{pos}) depends on x{bad[0]} of weight {P.weights[bad[0]]} >= {a}"
            )
        j = offsets[g] + pos
        images[j] = images[j] + phi
    return PolynomialMap(P.weights, tuple(images))


def central_torus_element(P: WeightedProjectiveSpace, t) -> PolynomialMap:
    """x_i -> t^{a_i} x_i; acts trivially on P."""
    t = to_field(t, None)
    if t == 0:
        raise StructuralError("torus parameter must be nonzero")
    n = P.nvars
    return PolynomialMap(
        P.weights, tuple(Polynomial.variable(n, i) * (t ** a) for i, a in enumerate(P.weights))
    )


def reductive_element(P: WeightedProjectiveSpace, blocks: Sequence[Sequence[Sequence]]) -> PolynomialMap:
    """Block-diagonal linear map: the g-th block acts on the g-th weight group.

    ``blocks[g]`` is an invertible r_g x r_g rational matrix; x_{g,p} is sent
    to sum_q blocks[g][p][q] * x_{g,q}.
    """
    _require_well_formed(P)
    if len(blocks) != len(P.groups):
        raise StructuralError(f"{len(blocks)} blocks for {len(P.groups)} weight groups")
    n = P.nvars
    images = []
    for (a, r), off, B in zip(P.groups, P.group_offsets(), blocks):
        M = [[Fraction(v) for v in row] for row in B]
        if len(M) != r or any(len(row) != r for row in M):
            raise StructuralError(f"block for weight {a} must be {r}x{r}")
        if _det(M) == 0:
            raise StructuralError(f"block for weight {a} is singular")
        for p in range(r):
            img = Polynomial.zero(n)
            for q in range(r):
                if M[p][q]:
                    img = img + Polynomial.variable(n, off + q) * M[p][q]
            images.append(img)
    return PolynomialMap(P.weights, tuple(images))


def _det(M: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def compose(sigma: PolynomialMap, tau: PolynomialMap) -> PolynomialMap:
    """Substitution composite: x_i -> sigma_i(tau(x)).

    Acting on polynomials, ``compose(s, t).apply(f) == t.apply(s.apply(f))``.
    """
    if sigma.weights != tau.weights:
        raise StructuralError("maps act on different weighted projective spaces")
    if sigma.nvars != len(sigma.weights):
        raise StructuralError("cannot compose maps that carry formal parameters")
    return PolynomialMap(sigma.weights, tuple(substitute(g, tau.images) for g in sigma.images))


def is_unipotent_form(P: WeightedProjectiveSpace, sigma: PolynomialMap) -> bool:
    """True if every image is x_j plus a polynomial in strictly lower-weight variables."""
    if sigma.weights != P.weights or sigma.nvars != P.nvars:
        return False
    for j, g in enumerate(sigma.images):
        rest = g - Polynomial.variable(P.nvars, j)
        if any(P.weights[v] >= P.weights[j] for v in rest.support()):
            return False
    return True
