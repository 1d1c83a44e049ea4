"""Weighted complete intersections X in P: descriptors, index, classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import NotWellFormedError, StructuralError
from .poly import count_monomials
from .wps import (
    WeightedProjectiveSpace,
    graded_dim,
    is_well_formed,
    series_quotient,
    singular_strata,
)

CLASS_GROUP_Z = "Cl≅Z by O_X(1)"
CLASS_GROUP_TORSION_FREE = "Cl torsion-free"


@dataclass(frozen=True)
class WCIDescriptor:
    """Weights plus multidegree (d_1, ..., d_k); both stored sorted."""

    ambient: WeightedProjectiveSpace
    degrees: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.ambient, WeightedProjectiveSpace):
            object.__setattr__(self, "ambient", WeightedProjectiveSpace(tuple(self.ambient)))
        ds = []
        for d in self.degrees:
            if isinstance(d, bool) or not isinstance(d, int) or d <= 0:
                raise StructuralError(f"degrees must be positive integers, got {d!r}")
            ds.append(d)
        if not ds:
            raise StructuralError("at least one degree is required")
        if len(ds) > self.ambient.dim:
            raise StructuralError(
                f"codimension {len(ds)} exceeds ambient dimension {self.ambient.dim}"
            )
        object.__setattr__(self, "degrees", tuple(sorted(ds)))

    @classmethod
    def of(cls, weights: Sequence[int], degrees: Sequence[int]) -> "WCIDescriptor":
        return cls(WeightedProjectiveSpace(tuple(weights)), tuple(degrees))

    @property
    def weights(self) -> tuple[int, ...]:
        return self.ambient.weights

    @property
    def codim(self) -> int:
        return len(self.degrees)

    @property
    def dim(self) -> int:
        return self.ambient.dim - self.codim

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "degrees": list(self.degrees)}

    @classmethod
    def from_dict(cls, data: dict) -> "WCIDescriptor":
        try:
            return cls.of(data["weights"], data["degrees"])
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"descriptor needs 'weights' and 'degrees' lists: {exc}") from exc

    def label(self) -> str:
        return f"({','.join(map(str, self.weights))}; {','.join(map(str, self.degrees))})"


class Kind(str, Enum):
    FANO = "Fano"
    CALABI_YAU = "CalabiYau"
    GENERAL_TYPE = "GeneralType"


@dataclass(frozen=True)
class ClassificationReport:
    index: int
    kind: Kind
    canonical_sheaf_exponent: int
    rationally_connected: bool
    not_uniruled: bool | None  # None means "unknown"
    class_group_note: str | None
    cy_stabilizer_note: bool
    linear_cone: bool
    dim: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind.value,
            "canonical_sheaf_exponent": self.canonical_sheaf_exponent,
            "rationally_connected": self.rationally_connected,
            "not_uniruled": "unknown" if self.not_uniruled is None else self.not_uniruled,
            "class_group_note": self.class_group_note,
            "cy_stabilizer_note": self.cy_stabilizer_note,
            "linear_cone": self.linear_cone,
            "dim": self.dim,
        }


def index(X: WCIDescriptor) -> int:
    """i_X = sum of weights minus sum of degrees."""
    return sum(X.weights) - sum(X.degrees)


def is_linear_cone(X: WCIDescriptor) -> bool:
    return not set(X.degrees).isdisjoint(X.weights)


def classify(X: WCIDescriptor) -> ClassificationReport:
    """Trichotomy by the sign of i_X, with the flags that follow from it.

    The flags are conditional on X being quasi-smooth and well formed; this
    function only reads the numerical data.  ``not_uniruled`` is None when
    i_X < 0 and some weight does not divide i_X, where nothing is known.
    """
    i = index(X)
    if i > 0:
        kind = Kind.FANO
    elif i == 0:
        kind = Kind.CALABI_YAU
    else:
        kind = Kind.GENERAL_TYPE
    if i == 0 or (i <= 0 and all(i % a == 0 for a in X.weights)):
        not_uniruled: bool | None = True
    else:
        not_uniruled = None
    if X.dim >= 3:
        note = CLASS_GROUP_Z
    elif X.dim == 2:
        note = CLASS_GROUP_TORSION_FREE
    else:
        note = None
    return ClassificationReport(
        index=i,
        kind=kind,
        canonical_sheaf_exponent=-i,
        rationally_connected=i > 0,
        not_uniruled=not_uniruled,
        class_group_note=note,
        cy_stabilizer_note=(i == 0 and X.codim == 1),
        linear_cone=is_linear_cone(X),
        dim=X.dim,
    )


@dataclass(frozen=True)
class WellFormednessVerdict:
    status: str  # "WellFormed" | "Fails" | "Indeterminate"
    stratum: object = None  # SingularStratum responsible for Fails/Indeterminate
    details: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "stratum": None if self.stratum is None else self.stratum.to_dict(),
            "strata": [dict(d) for d in self.details],
        }


WELL_FORMED = "WellFormed"
FAILS = "Fails"
INDETERMINATE = "Indeterminate"


def generic_wellformedness(X: WCIDescriptor, strict: bool = False) -> WellFormednessVerdict:
    """Expected-dimension test of codim_X(X ∩ Sing P) >= 2 for a generic X.

    For each maximal singular stratum with index set S, an equation of
    degree d_j cuts the stratum only if some monomial of degree d_j exists in
    the variables of S; the expected dimension of X ∩ stratum is then
    max(-1, |S| - 1 - c_S).  In strict mode a stratum meeting X in codimension
    exactly 2 makes the verdict Indeterminate instead of WellFormed.
    """
    P = X.ambient
    if not is_well_formed(P):
        raise NotWellFormedError(f"ambient {P.grouped_label()} is not well formed")
    rows = []
    boundary = None
    for S in singular_strata(P):
        sub_w = [P.weights[i] for i in S.indices]
        cuts = sum(1 for d in X.degrees if count_monomials(sub_w, d) > 0)
        expected = max(-1, len(S.indices) - 1 - cuts)
        codim = X.dim - expected
        rows.append({"indices": list(S.indices), "gcd": S.gcd, "cuts": cuts, "expected_dim": expected, "codim": codim})
        if expected >= 0 and codim < 2:
            return WellFormednessVerdict(FAILS, S, tuple(rows))
        if expected >= 0 and codim == 2 and boundary is None:
            boundary = S
    if strict and boundary is not None:
        return WellFormednessVerdict(INDETERMINATE, boundary, tuple(rows))
    return WellFormednessVerdict(WELL_FORMED, None, tuple(rows))


def hilbert_series_X(X: WCIDescriptor, up_to: int) -> list[int]:
    """Coefficients of prod(1 - t^{d_j}) / prod(1 - t^{a_i}).

    Valid when the equations form a regular sequence.
    """
    return series_quotient(X.degrees, X.weights, up_to)


@dataclass(frozen=True)
class RestrictionRow:
    degree: int
    ambient_dim: int
    restricted_dim: int
    kernel_dim: int

    def to_dict(self) -> dict:
        return {
            "m": self.degree,
            "dim_R_P": self.ambient_dim,
            "dim_R_X": self.restricted_dim,
            "kernel": self.kernel_dim,
        }


@dataclass(frozen=True)
class RestrictionReport:
    rows: tuple[RestrictionRow, ...]
    linear_cone_caveat: bool

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "linear_cone_caveat": self.linear_cone_caveat}


def restriction_surjectivity_report(X: WCIDescriptor, up_to: int) -> RestrictionReport:
    """Per-degree dims of R(P)_m, R(X)_m and the kernel of the (surjective) restriction."""
    hx = hilbert_series_X(X, up_to)
    rows = []
    for m in range(up_to + 1):
        dp = graded_dim(X.ambient, m)
        rows.append(RestrictionRow(m, dp, hx[m], dp - hx[m]))
    return RestrictionReport(tuple(rows), is_linear_cone(X))
